#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geodom/barrier.hpp"
#include "geodom/pathspace.hpp"

namespace geodom {

// Conservative Lagrangian data: kinetic term from the manifold metric plus a
// potential, at a fixed energy level E. Every consumer rechecks E - V > 0
// pointwise; sup V is only ever estimated by sampling.
struct LagrangianProblem {
  std::shared_ptr<const ChartManifold> manifold;
  ScalarField potential;
  double energy = 0.0;
};

// Conformal metric (E - V(x)) g(x); inherits periodic axes, chart domain
// shrinks to {V < E}. Carries analytic derivatives when both ingredients do.
std::shared_ptr<ChartManifold> jacobi_metric(const LagrangianProblem& prob);

// Max normalized defect of the conformal Hessian relation
//   H^E_phi[v,v] = H_phi[v,v] + <grad phi, grad u><v,v> - 2<grad u,v><grad phi,v>
// with u = log(E - V)/2, left side evaluated under the conformal metric and
// right side from base-metric quantities.
double hessian_transform_check(const LagrangianProblem& prob, const Barrier& b,
                               const std::vector<Vec>& samples, int dirs_per_sample,
                               std::uint64_t seed);

struct RepCheckResult {
  double m_prime = 0.0;  // max over samples of max(0, -<grad phi, grad V>/phi)
  std::vector<double> per_level;
  bool pass = false;
  std::string reason;
};

// Compatibility of the potential with the barrier: <grad phi, grad V> must
// not push below -M' phi for a stable constant M' across levels.
RepCheckResult rep_check(const LagrangianProblem& prob, const Barrier& b,
                         const std::vector<double>& levels, int samples_per_level,
                         std::uint64_t seed, const Box& box);

struct Trajectory {
  std::vector<double> t;
  Mat points;      // one row per sample
  Mat velocities;  // dx/dt rows
  std::vector<double> energy_profile;
  double ode_residual = 0.0;   // max |D_t xdot + grad V|_g
  double energy_spread = 0.0;  // max - min of the profile
  bool ok = false;
  std::string tag;  // "reparametrization-failed" diagnostics when !ok
};

struct TrajectoryTolerances {
  double ode_residual = 1e-2;
  double energy_spread_rel = 1e-4;  // relative to |E|
};

// Reparametrizes a converged geodesic of the Jacobi metric into a solution of
// the Lagrangian system with energy E: dt/ds = c/(E - V) with c fixed by the
// geodesic's constant conformal speed so that |xdot|_g^2/2 + V = E.
Trajectory trajectory_from_geodesic(const LagrangianProblem& prob, const DiscretePath& geodesic,
                                    const TrajectoryTolerances& tol = {});

// Conformal arc length of a parametric curve under the Jacobi metric,
// adaptive Simpson quadrature on |x'(s)|_{gE}.
double jacobi_length(const LagrangianProblem& prob,
                     const std::function<Vec(double)>& curve,
                     const std::function<Vec(double)>& curve_dot, double s0, double s1,
                     double tol = 1e-10);

}  // namespace geodom
