#include "geodom/barrier.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace geodom {

Barrier::Barrier(std::shared_ptr<const ChartManifold> manifold, ScalarField phi,
                 std::vector<double> level_schedule)
    : manifold_(std::move(manifold)), phi_(std::move(phi)),
      level_schedule_(std::move(level_schedule)) {
  if (level_schedule_.empty()) level_schedule_ = geometric_schedule(0.5, 6);
  for (std::size_t i = 0; i + 1 < level_schedule_.size(); ++i) {
    if (!(level_schedule_[i] > level_schedule_[i + 1]) || !(level_schedule_[i + 1] > 0.0)) {
      throw InputError("level schedule must be strictly decreasing and positive");
    }
  }
}

std::vector<double> Barrier::geometric_schedule(double a0, int count, double ratio) {
  std::vector<double> s;
  double a = a0;
  for (int i = 0; i < count; ++i, a *= ratio) s.push_back(a);
  return s;
}

double Barrier::grad_norm(const Vec& x) const {
  const Vec df = manifold_->field_gradient(phi_, x);
  const Mat g = manifold_->metric_at(x);
  const Vec gr = g.llt().solve(df);
  return std::sqrt(std::max(0.0, df.dot(gr)));
}

int default_flow_steps(double s) {
  return std::max(kFlowMinSteps, static_cast<int>(std::ceil(std::abs(s) * kFlowStepsPerUnitTime)));
}

namespace {

// -grad(phi)/|grad phi|^2 at x; throws on degenerate gradient.
Vec flow_field(const Barrier& b, const Vec& x) {
  const ChartManifold& m = b.manifold();
  const Vec df = m.field_gradient(b.phi(), x);
  const Mat g = m.metric_at(x);
  const Vec gr = g.llt().solve(df);
  const double n2 = df.dot(gr);
  if (!(n2 > kGradFloor * kGradFloor)) {
    throw DegenerateGradientError("normalized flow: |grad phi| below floor at phi=" +
                                  std::to_string(b.value(x)));
  }
  return -gr / n2;
}

Vec rk4_flow(const Barrier& b, Vec x, double s, int steps) {
  const double h = s / steps;
  for (int n = 0; n < steps; ++n) {
    const Vec k1 = flow_field(b, x);
    const Vec k2 = flow_field(b, x + 0.5 * h * k1);
    const Vec k3 = flow_field(b, x + 0.5 * h * k2);
    const Vec k4 = flow_field(b, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace

Vec flow(const Barrier& b, const Vec& x, double s, int steps) {
  if (steps < 1) throw InputError("flow: steps must be >= 1");
  const double phi0 = b.value(x);
  if (!(phi0 > 0.0)) throw BoundaryViolationError("flow: start point outside D", -1);
  if (s >= phi0) {
    throw BoundaryReachError("flow: time " + std::to_string(s) + " >= phi(x) = " +
                             std::to_string(phi0));
  }
  if (s == 0.0) return x;
  return rk4_flow(b, x, s, steps);
}

Vec flow(const Barrier& b, const Vec& x, double s) { return flow(b, x, s, default_flow_steps(s)); }

Vec project_to_level(const Barrier& b, const Vec& x, double a) {
  return project_to_level(b, x, a, default_flow_steps(b.value(x) - a));
}

Vec project_to_level(const Barrier& b, const Vec& x, double a, int steps) {
  const double phi0 = b.value(x);
  if (!(a > 0.0)) throw InputError("project_to_level: target level must be positive");
  if (a > phi0 * (1.0 + 1e-14) + 1e-14) {
    throw WrongSideError("project_to_level: target level " + std::to_string(a) +
                         " above phi(x) = " + std::to_string(phi0));
  }
  const double tau = phi0 - a;
  Vec y = x;
  if (tau > 0.0) y = rk4_flow(b, y, tau, steps);
  // Newton polish along the flow line; dphi/ds = -1 makes this quadratic.
  const double tol = 1e-12 * std::max(1.0, a);
  for (int it = 0; it < 12; ++it) {
    const double delta = b.value(y) - a;
    if (std::abs(delta) <= tol) break;
    y = rk4_flow(b, y, delta, 1);
  }
  return y;
}

namespace {

double chart_opnorm(const Mat& j) {
  Eigen::JacobiSVD<Mat> svd(j);
  return svd.singularValues().maxCoeff();
}

// sup_v |J v|_{g_to} / |v|_{g_from}: largest generalized eigenvalue of
// (J^T g_to J, g_from).
double metric_opnorm(const Mat& j, const Mat& g_from, const Mat& g_to) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(j.transpose() * g_to * j, g_from,
                                                   Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

FlowBounds flow_derivative_bounds(const Barrier& b, const Box& region, double s_max,
                                  int n_samples, std::uint64_t seed, double a_floor) {
  if (n_samples < 1) throw InputError("flow_derivative_bounds: n_samples must be >= 1");
  const ChartManifold& m = b.manifold();
  const int n = m.dim();
  Rng rng(seed);
  FlowBounds out;

  for (int k = 0; k < n_samples; ++k) {
    const Vec x = rng.in_box(region);
    const double u = rng.uniform();
    try {
      const double phi0 = b.value(x);
      if (!(phi0 > a_floor) || !b.inside(x)) throw BoundaryViolationError("outside", -1);
      const double cap = std::min(s_max, phi0 - std::max(a_floor, 1e-6 * phi0));
      if (!(cap > 0.0)) throw BoundaryReachError("no admissible flow time");
      const double s = u * cap;
      const int steps = default_flow_steps(s);

      const Vec y0 = flow(b, x, s, steps);
      const Mat g_from = m.metric_at(x);
      const Mat g_to = m.metric_at(y0);

      const double h1 = fd::step1(x);
      Mat jac(n, n);
      for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h1;
        xm[i] -= h1;
        jac.col(i) = (flow(b, xp, s, steps) - flow(b, xm, s, steps)) / (2.0 * h1);
      }
      const double h2 = fd::step2(x);
      double c2 = 0.0, c2m = 0.0;
      for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h2;
        xm[i] -= h2;
        const Vec d2 = (flow(b, xp, s, steps) - 2.0 * y0 + flow(b, xm, s, steps)) / (h2 * h2);
        c2 = std::max(c2, d2.norm());
        const double e_from = std::sqrt(g_from(i, i));
        c2m = std::max(c2m, std::sqrt(std::max(0.0, d2.dot(g_to * d2))) / (e_from * e_from));
      }

      out.c1 = std::max(out.c1, chart_opnorm(jac));
      out.c1_metric = std::max(out.c1_metric, metric_opnorm(jac, g_from, g_to));
      out.c2 = std::max(out.c2, c2);
      out.c2_metric = std::max(out.c2_metric, c2m);
      ++out.n_ok;
    } catch (const Error&) {
      ++out.n_failed;
    }
  }
  if (out.n_failed * 2 > n_samples) {
    throw UnusableRegionError("flow_derivative_bounds: more than half of the samples failed");
  }
  return out;
}

}  // namespace geodom
