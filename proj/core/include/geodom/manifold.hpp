#pragma once

#include <functional>
#include <string>
#include <vector>

#include "geodom/errors.hpp"
#include "geodom/types.hpp"

namespace geodom {

struct PeriodicAxis {
  int axis;
  double period;
};

struct TangentVector {
  Vec base;
  Vec comps;
};

// Result of shooting a geodesic: states sampled at uniform parameter steps.
struct GeodesicPath {
  std::vector<double> times;
  std::vector<Vec> points;
  std::vector<Vec> velocities;
  const Vec& endpoint() const { return points.back(); }
};

// An n-dimensional Riemannian manifold presented in a single coordinate chart
// with an explicit metric tensor field g(x). All differential operators are
// intrinsic to the chart: Levi-Civita coefficients come from derivatives of g
// (analytic when supplied, central differences otherwise), and the covariant
// Hessian of a scalar field f is H_f = d2f - Gamma^k d_k f.
class ChartManifold {
 public:
  using MetricFn = std::function<Mat(const Vec&)>;
  // Returns the n partial-derivative matrices d_k g(x).
  using MetricDerivFn = std::function<std::vector<Mat>(const Vec&)>;
  using DomainFn = std::function<bool(const Vec&)>;

  ChartManifold(int dim, MetricFn metric, std::string name = "chart");

  ChartManifold& set_metric_derivative(MetricDerivFn d) {
    metric_deriv_ = std::move(d);
    return *this;
  }
  ChartManifold& set_chart_domain(DomainFn d) {
    chart_domain_ = std::move(d);
    return *this;
  }
  ChartManifold& add_periodic_axis(int axis, double period) {
    periodic_.push_back({axis, period});
    return *this;
  }

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const std::vector<PeriodicAxis>& periodic_axes() const { return periodic_; }
  bool in_chart(const Vec& x) const { return !chart_domain_ || chart_domain_(x); }
  bool has_metric_derivative() const { return static_cast<bool>(metric_deriv_); }

  // Metric evaluation with fail-fast validation: symmetry to 1e-12 and
  // positive definiteness are asserted at every call.
  Mat metric_at(const Vec& x) const;
  std::vector<Mat> metric_derivative_at(const Vec& x) const;

  double inner(const TangentVector& u, const TangentVector& v) const;
  double inner(const Vec& base, const Vec& u, const Vec& v) const;
  double norm(const Vec& base, const Vec& u) const;

  // Gamma[k](i,j), symmetric in (i,j).
  std::vector<Mat> christoffel(const Vec& x) const;

  // Fixed-step RK4 integration of the geodesic equation from (x0, v0).
  GeodesicPath geodesic_shoot(const Vec& x0, const Vec& v0, double T, int steps) const;

  // Riemannian gradient g^{-1} df and covariant Hessian of a scalar field.
  TangentVector riem_grad(const ScalarField& field, const Vec& x) const;
  Mat cov_hessian(const ScalarField& field, const Vec& x) const;

  // Chart partials of a field, analytic when available.
  Vec field_gradient(const ScalarField& field, const Vec& x) const;
  Mat field_hessian(const ScalarField& field, const Vec& x) const;

  // Shortest-representative difference b - a (wraps periodic axes).
  Vec wrap_delta(Vec d) const;

 private:
  void require_in_chart(const Vec& x) const;

  int dim_;
  MetricFn metric_;
  MetricDerivFn metric_deriv_;
  DomainFn chart_domain_;
  std::vector<PeriodicAxis> periodic_;
  std::string name_;
};

}  // namespace geodom
