#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geodom/pathspace.hpp"

namespace geodom {

struct SolverConfig {
  double eps0 = 0.5;
  double eps_ratio = 0.5;
  double eps_min = 1e-8;
  double grad_tol = 1e-8;
  int max_inner_iters = 5000;
  int max_outer_stages = 40;
  int k_nodes = 100;  // segment count K
  std::uint64_t seed = 0;

  // Continuation safeguards.
  double collapse_ratio = 0.85;  // sustained per-stage min-phi decay => collapse
  int collapse_window = 5;
  double beta_floor = 0.5;       // final min-phi must keep this fraction of previous stage
  double seed_level = -1.0;      // raise seed nodes to this level; <0 means schedule front

  void validate() const;
};

// Initial-path class: chart-linear interpolation, optionally wound along
// periodic axes and/or routed through a waypoint.
struct SeedDescriptor {
  std::vector<int> winding;
  std::optional<Vec> via;
  std::string label;
};

struct StageRecord {
  int stage = 0;
  double eps = 0.0;
  double f_eps = 0.0;
  double f = 0.0;
  double min_phi = 0.0;
  double el_residual = 0.0;
  double e_spread = 0.0;
  double max_lambda = 0.0;
  double grad_norm = 0.0;
  int inner_iters = 0;
  bool hit_tol = false;
};

struct SolveReport {
  DiscretePath path;
  double f_value = 0.0;
  double beta = 0.0;  // min over stages of min_s phi
  bool converged = false;
  std::string failure_reason;  // empty when converged
  std::vector<StageRecord> stages;
  double geodesic_residual = 0.0;  // el_residual with the penalty switched off
  std::string seed_label;
};

struct InnerStats {
  int iters = 0;
  bool hit_tol = false;
  double grad_norm = 0.0;
};

// One fixed-eps descent: monotone line search (Barzilai-Borwein step seed,
// Armijo backtracking, steps crossing phi <= 0 rejected). Returns the path
// unchanged when it is already critical to tolerance.
DiscretePath minimize_stage(const DiscretePath& path0, const Barrier& b, double eps,
                            const SolverConfig& cfg, InnerStats* stats = nullptr);

// Build the default initial path for a seed class: interpolate, nudge nodes
// off the boundary, raise low nodes to the seed level along the uphill flow.
DiscretePath seed_path(const Vec& p, const Vec& q, const Barrier& b, const SolverConfig& cfg,
                       const SeedDescriptor& seed = {});

// Full penalization pipeline: stages eps_m = eps0 * ratio^m warm-started down
// to eps_min, with boundary-collapse detection and final residual checks.
SolveReport solve(const Vec& p, const Vec& q, const Barrier& b, const SolverConfig& cfg,
                  const SeedDescriptor& seed = {});

struct MultiplicityResult {
  std::vector<SolveReport> geodesics;  // converged, sorted by f
  std::vector<SolveReport> dropped;    // collapsed / non-converged classes
};

MultiplicityResult solve_multiplicity(const Vec& p, const Vec& q, const Barrier& b,
                                      const SolverConfig& cfg,
                                      const std::vector<SeedDescriptor>& classes);

// Max node-wise chart distance; used to tell geodesics apart.
double path_separation(const DiscretePath& a, const DiscretePath& c);

}  // namespace geodom
