#pragma once

#include <memory>
#include <vector>

#include "geodom/manifold.hpp"

namespace geodom {

// Floor below which the normalized flow field grad(phi)/|grad phi|^2 is
// considered degenerate and operations abort.
inline constexpr double kGradFloor = 1e-8;

// The open domain D = {phi > 0} seen through its barrier function phi,
// together with the level schedule (a_m) of invading hypersurfaces.
class Barrier {
 public:
  Barrier(std::shared_ptr<const ChartManifold> manifold, ScalarField phi,
          std::vector<double> level_schedule = {});

  const ChartManifold& manifold() const { return *manifold_; }
  std::shared_ptr<const ChartManifold> manifold_ptr() const { return manifold_; }
  const ScalarField& phi() const { return phi_; }
  const std::vector<double>& level_schedule() const { return level_schedule_; }

  double value(const Vec& x) const { return phi_.value(x); }
  bool inside(const Vec& x) const { return in_chart(x) && value(x) > 0.0; }
  bool in_chart(const Vec& x) const { return manifold_->in_chart(x); }

  // Riemannian gradient of phi and its g-norm.
  TangentVector grad(const Vec& x) const { return manifold_->riem_grad(phi_, x); }
  double grad_norm(const Vec& x) const;

  // Rebind the same phi to another manifold (conformal changes keep D).
  Barrier rebind(std::shared_ptr<const ChartManifold> m) const {
    return Barrier(std::move(m), phi_, level_schedule_);
  }

  static std::vector<double> geometric_schedule(double a0, int count, double ratio = 0.5);

 private:
  std::shared_ptr<const ChartManifold> manifold_;
  ScalarField phi_;
  std::vector<double> level_schedule_;
};

// Normalized gradient flow eta' = -grad(phi)/|grad phi|^2, which decreases
// phi at unit rate: phi(eta(s,x)) = phi(x) - s. Negative s flows uphill.
Vec flow(const Barrier& b, const Vec& x, double s, int steps);
Vec flow(const Barrier& b, const Vec& x, double s);  // steps from default density

// Point on the level set phi = a reached by flowing from x (phi(x) >= a > 0).
// RK4 transport followed by a Newton polish along the flow field; the result
// satisfies |phi - a| <= 1e-8 * max(1, a).
Vec project_to_level(const Barrier& b, const Vec& x, double a);
Vec project_to_level(const Barrier& b, const Vec& x, double a, int steps);

struct FlowBounds {
  double c1 = 0.0;        // max chart operator norm of d(eta)/dx
  double c2 = 0.0;        // max chart norm of directional second differences
  double c1_metric = 0.0; // same, measured in the metric-weighted norm
  double c2_metric = 0.0;
  int n_ok = 0;
  int n_failed = 0;
};

// Samples (x, s) with x in `region`, 0 <= s <= min(s_max, phi(x) - a_floor),
// and estimates first/second derivative bounds of the flow map by central
// differences. Deterministic per seed. Failed samples are excluded; more than
// 50% failures raises UnusableRegionError.
FlowBounds flow_derivative_bounds(const Barrier& b, const Box& region, double s_max,
                                  int n_samples, std::uint64_t seed, double a_floor = 0.0);

inline constexpr int kFlowStepsPerUnitTime = 256;
inline constexpr int kFlowMinSteps = 32;
int default_flow_steps(double s);

}  // namespace geodom
