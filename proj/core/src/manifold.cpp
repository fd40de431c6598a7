#include "geodom/manifold.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace geodom {

namespace {

std::string point_str(const Vec& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

double smallest_eigenvalue(const Mat& g) {
  if (g.rows() == 1) return g(0, 0);
  if (g.rows() == 2) {
    // Closed form for symmetric 2x2.
    const double tr = g(0, 0) + g(1, 1);
    const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    return 0.5 * (tr - disc);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

ChartManifold::ChartManifold(int dim, MetricFn metric, std::string name)
    : dim_(dim), metric_(std::move(metric)), name_(std::move(name)) {}

void ChartManifold::require_in_chart(const Vec& x) const {
  if (!in_chart(x)) {
    throw ChartDomainError("point " + point_str(x) + " outside chart domain of '" + name_ + "'");
  }
}

Mat ChartManifold::metric_at(const Vec& x) const {
  require_in_chart(x);
  Mat g = metric_(x);
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw IllConditionedMetricError("metric not symmetric at " + point_str(x));
  }
  if (smallest_eigenvalue(g) <= 0.0) {
    throw IllConditionedMetricError("metric not positive definite at " + point_str(x));
  }
  return g;
}

std::vector<Mat> ChartManifold::metric_derivative_at(const Vec& x) const {
  if (metric_deriv_) return metric_deriv_(x);
  const double h = fd::step1(x);
  std::vector<Mat> dg(dim_);
  Vec xp = x, xm = x;
  for (int k = 0; k < dim_; ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    dg[k] = (metric_at(xp) - metric_at(xm)) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return dg;
}

double ChartManifold::inner(const TangentVector& u, const TangentVector& v) const {
  if ((u.base - v.base).cwiseAbs().maxCoeff() > 0.0) {
    throw ChartDomainError("inner product of vectors at different base points");
  }
  return inner(u.base, u.comps, v.comps);
}

double ChartManifold::inner(const Vec& base, const Vec& u, const Vec& v) const {
  return u.dot(metric_at(base) * v);
}

double ChartManifold::norm(const Vec& base, const Vec& u) const {
  return std::sqrt(std::max(0.0, inner(base, u, u)));
}

std::vector<Mat> ChartManifold::christoffel(const Vec& x) const {
  const Mat g = metric_at(x);
  const double lmin = smallest_eigenvalue(g);
  const double lmax = g.cwiseAbs().maxCoeff();
  if (lmin < 1e-12 * std::max(1.0, lmax)) {
    throw IllConditionedMetricError("near-singular metric at " + point_str(x));
  }
  const std::vector<Mat> dg = metric_derivative_at(x);
  const Mat ginv = g.inverse();

  std::vector<Mat> gamma(dim_, Mat::Zero(dim_, dim_));
  for (int k = 0; k < dim_; ++k) {
    for (int i = 0; i < dim_; ++i) {
      for (int j = i; j < dim_; ++j) {
        double s = 0.0;
        for (int l = 0; l < dim_; ++l) {
          s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        }
        gamma[k](i, j) = 0.5 * s;
        gamma[k](j, i) = gamma[k](i, j);
      }
    }
  }
  return gamma;
}

GeodesicPath ChartManifold::geodesic_shoot(const Vec& x0, const Vec& v0, double T,
                                           int steps) const {
  if (steps < 1) throw InputError("geodesic_shoot: steps must be >= 1");
  require_in_chart(x0);

  auto acc = [this](const Vec& x, const Vec& v) -> Vec {
    const std::vector<Mat> gamma = christoffel(x);
    Vec a(dim_);
    for (int k = 0; k < dim_; ++k) a[k] = -v.dot(gamma[k] * v);
    return a;
  };

  GeodesicPath out;
  out.times.reserve(steps + 1);
  out.points.reserve(steps + 1);
  out.velocities.reserve(steps + 1);
  out.times.push_back(0.0);
  out.points.push_back(x0);
  out.velocities.push_back(v0);

  const double h = T / steps;
  Vec x = x0, v = v0;
  for (int n = 0; n < steps; ++n) {
    try {
      const Vec k1x = v, k1v = acc(x, v);
      const Vec k2x = v + 0.5 * h * k1v, k2v = acc(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
      const Vec k3x = v + 0.5 * h * k2v, k3v = acc(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
      const Vec k4x = v + h * k3v, k4v = acc(x + h * k3x, v + h * k3v);
      x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      if (!in_chart(x)) throw ChartDomainError("left chart");
    } catch (const Error&) {
      throw EscapeError("geodesic left chart domain at t=" + std::to_string(out.times.back()),
                        out.times.back(), out.points.back(), out.velocities.back());
    }
    out.times.push_back(h * (n + 1));
    out.points.push_back(x);
    out.velocities.push_back(v);
  }
  return out;
}

Vec ChartManifold::field_gradient(const ScalarField& field, const Vec& x) const {
  if (field.has_gradient()) return field.gradient(x);
  const double h = fd::step1(x);
  Vec d(dim_);
  Vec xp = x, xm = x;
  for (int k = 0; k < dim_; ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    d[k] = (field.value(xp) - field.value(xm)) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return d;
}

Mat ChartManifold::field_hessian(const ScalarField& field, const Vec& x) const {
  if (field.has_hessian()) return field.hessian(x);
  const double h = fd::step2(x);
  Mat hess(dim_, dim_);
  const double f0 = field.value(x);
  Vec xa = x, xb = x;
  for (int i = 0; i < dim_; ++i) {
    xa[i] = x[i] + h;
    xb[i] = x[i] - h;
    hess(i, i) = (field.value(xa) - 2.0 * f0 + field.value(xb)) / (h * h);
    xa[i] = x[i];
    xb[i] = x[i];
  }
  for (int i = 0; i < dim_; ++i) {
    for (int j = i + 1; j < dim_; ++j) {
      Vec xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += h; xpp[j] += h;
      xpm[i] += h; xpm[j] -= h;
      xmp[i] -= h; xmp[j] += h;
      xmm[i] -= h; xmm[j] -= h;
      hess(i, j) = (field.value(xpp) - field.value(xpm) - field.value(xmp) + field.value(xmm)) /
                   (4.0 * h * h);
      hess(j, i) = hess(i, j);
    }
  }
  return hess;
}

TangentVector ChartManifold::riem_grad(const ScalarField& field, const Vec& x) const {
  const Mat g = metric_at(x);
  const Vec df = field_gradient(field, x);
  return TangentVector{x, g.llt().solve(df)};
}

Mat ChartManifold::cov_hessian(const ScalarField& field, const Vec& x) const {
  const Mat d2 = field_hessian(field, x);
  const Vec df = field_gradient(field, x);
  const std::vector<Mat> gamma = christoffel(x);
  Mat hess = d2;
  for (int k = 0; k < dim_; ++k) hess -= df[k] * gamma[k];
  return 0.5 * (hess + hess.transpose());
}

Vec ChartManifold::wrap_delta(Vec d) const {
  for (const PeriodicAxis& p : periodic_) {
    double& v = d[p.axis];
    v = std::remainder(v, p.period);
  }
  return d;
}

}  // namespace geodom
