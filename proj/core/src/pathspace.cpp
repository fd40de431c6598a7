#include "geodom/pathspace.hpp"

#include <cmath>

namespace geodom {

DiscretePath DiscretePath::line(const Vec& p, const Vec& q, int k_segments) {
  if (k_segments < 2) throw InputError("DiscretePath: need K >= 2 segments");
  DiscretePath path;
  path.nodes.resize(k_segments + 1, p.size());
  for (int i = 0; i <= k_segments; ++i) {
    const double t = static_cast<double>(i) / k_segments;
    path.nodes.row(i) = ((1.0 - t) * p + t * q).transpose();
  }
  return path;
}

DiscretePath DiscretePath::reversed() const {
  DiscretePath out;
  out.nodes = nodes.colwise().reverse();
  out.winding = winding;
  for (int& w : out.winding) w = -w;
  return out;
}

namespace {

struct SegmentGeom {
  Vec delta;  // shortest-representative difference
  Vec mid;
};

SegmentGeom segment(const DiscretePath& path, const ChartManifold& m, int i) {
  SegmentGeom s;
  s.delta = m.wrap_delta(path.node(i + 1) - path.node(i));
  s.mid = path.node(i) + 0.5 * s.delta;
  return s;
}

void check_nodes_inside(const DiscretePath& path, const Barrier& b) {
  for (int i = 0; i <= path.segments(); ++i) {
    const Vec x = path.node(i);
    if (!b.in_chart(x) || !(b.value(x) > 0.0)) {
      throw BoundaryViolationError("node " + std::to_string(i) + " outside D (phi = " +
                                       std::to_string(b.in_chart(x) ? b.value(x) : std::nan("")) +
                                       ")",
                                   i);
    }
  }
}

}  // namespace

double energy(const DiscretePath& path, const ChartManifold& m) {
  const int K = path.segments();
  double f = 0.0;
  for (int i = 0; i < K; ++i) {
    const SegmentGeom s = segment(path, m, i);
    f += s.delta.dot(m.metric_at(s.mid) * s.delta);
  }
  return 0.5 * K * f;
}

PathEval penalized_energy(const DiscretePath& path, const Barrier& b, double eps,
                          bool want_grad) {
  if (eps < 0.0 || eps > 1.0) throw InputError("penalized_energy: eps must be in [0, 1]");
  const ChartManifold& m = b.manifold();
  const int K = path.segments();
  const int n = path.dim();
  if (eps > 0.0) check_nodes_inside(path, b);

  PathEval ev;
  ev.grad = Mat::Zero(std::max(0, K - 1), n);
  ev.e_profile.resize(K);
  ev.lambda_profile.assign(K + 1, 0.0);

  // Action term and its gradient.
  for (int i = 0; i < K; ++i) {
    const SegmentGeom s = segment(path, m, i);
    const Mat g = m.metric_at(s.mid);
    const Vec gd = g * s.delta;
    const double quad = s.delta.dot(gd);
    ev.f += quad;
    ev.e_profile[i] = 0.5 * K * K * quad;

    if (want_grad) {
      Vec tvec = Vec::Zero(n);  // d/dmid of delta^T g delta
      const std::vector<Mat> dg = m.metric_derivative_at(s.mid);
      for (int k = 0; k < n; ++k) tvec[k] = s.delta.dot(dg[k] * s.delta);
      // d f / d x_i gets -2 g delta + t/2; d f / d x_{i+1} gets +2 g delta + t/2.
      if (i >= 1) ev.grad.row(i - 1) += (0.5 * K) * (-2.0 * gd + 0.5 * tvec).transpose();
      if (i + 1 <= K - 1) ev.grad.row(i) += (0.5 * K) * (2.0 * gd + 0.5 * tvec).transpose();
    }
  }
  ev.f *= 0.5 * K;

  // Penalty term: node quadrature over all K+1 nodes with weight 1/K.
  if (eps > 0.0) {
    for (int i = 0; i <= K; ++i) {
      const Vec x = path.node(i);
      const double phi = b.value(x);
      ev.penalty += eps / (phi * phi) / K;
      ev.lambda_profile[i] = 2.0 * eps / (phi * phi * phi);
      if (want_grad && i >= 1 && i <= K - 1) {
        const Vec dphi = m.field_gradient(b.phi(), x);
        ev.grad.row(i - 1) += (-2.0 * eps / (phi * phi * phi) / K) * dphi.transpose();
      }
    }
    for (int i = 0; i < K; ++i) {
      const SegmentGeom s = segment(path, m, i);
      const double phi_mid = b.value(s.mid);
      if (phi_mid > 0.0) ev.e_profile[i] -= eps / (phi_mid * phi_mid);
    }
  }
  return ev;
}

double el_residual(const DiscretePath& path, const Barrier& b, double eps) {
  const ChartManifold& m = b.manifold();
  const int K = path.segments();
  if (K < 4) throw InputError("el_residual: need K >= 4");
  if (eps > 0.0) check_nodes_inside(path, b);

  double worst = 0.0;
  for (int i = 1; i < K; ++i) {
    const Vec x = path.node(i);
    const Vec d_prev = m.wrap_delta(path.node(i) - path.node(i - 1));
    const Vec d_next = m.wrap_delta(path.node(i + 1) - path.node(i));
    const Vec acc = static_cast<double>(K) * K * (d_next - d_prev);
    const Vec vel = 0.5 * K * (d_next + d_prev);

    const std::vector<Mat> gamma = m.christoffel(x);
    Vec r = acc;
    for (int k = 0; k < m.dim(); ++k) r[k] += vel.dot(gamma[k] * vel);

    if (eps > 0.0) {
      const double phi = b.value(x);
      const double lambda = 2.0 * eps / (phi * phi * phi);
      r += lambda * m.riem_grad(b.phi(), x).comps;
    }
    worst = std::max(worst, m.norm(x, r));
  }
  return worst;
}

double grad_norm(const DiscretePath& path, const ChartManifold& m, const Mat& grad) {
  double s = 0.0;
  for (int i = 0; i < grad.rows(); ++i) {
    const Vec x = path.node(i + 1);
    const Vec df = grad.row(i).transpose();
    s += df.dot(m.metric_at(x).llt().solve(df));
  }
  return std::sqrt(std::max(0.0, s));
}

double path_length(const DiscretePath& path, const ChartManifold& m) {
  double len = 0.0;
  for (int i = 0; i < path.segments(); ++i) {
    const SegmentGeom s = segment(path, m, i);
    len += std::sqrt(std::max(0.0, s.delta.dot(m.metric_at(s.mid) * s.delta)));
  }
  return len;
}

std::vector<double> node_speeds(const DiscretePath& path, const ChartManifold& m) {
  const int K = path.segments();
  std::vector<double> speeds(K + 1);
  for (int i = 0; i <= K; ++i) {
    Vec v;
    if (i == 0) {
      v = static_cast<double>(K) * m.wrap_delta(path.node(1) - path.node(0));
    } else if (i == K) {
      v = static_cast<double>(K) * m.wrap_delta(path.node(K) - path.node(K - 1));
    } else {
      v = 0.5 * K *
          (m.wrap_delta(path.node(i + 1) - path.node(i)) +
           m.wrap_delta(path.node(i) - path.node(i - 1)));
    }
    speeds[i] = m.norm(path.node(i), v);
  }
  return speeds;
}

}  // namespace geodom
