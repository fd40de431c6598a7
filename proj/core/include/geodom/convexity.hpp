#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geodom/barrier.hpp"

namespace geodom {

struct LevelSamples {
  std::vector<Vec> points;
  int attempts = 0;
  bool sparse = false;  // fewer than n/2 successes
};

// n points on phi^{-1}(a) obtained by rejection sampling in `box` followed by
// level projection; |phi - a| < 1e-9 on every returned point.
LevelSamples level_sample(const Barrier& b, double a, int n, std::uint64_t seed, const Box& box);

enum class DirectionMode { Tangent, All };

// H_phi(x)[v,v] / (<v,v>_g phi(x)); 0-homogeneous in v.
double hessian_ratio(const Barrier& b, const Vec& x, const Vec& v);

struct MEstimate {
  double value = 0.0;
  int n_failures = 0;
};

// Max of hessian_ratio over samples and unit directions: a g-orthonormal
// frame sweep (tangent mode g-orthogonalizes against grad phi) plus seeded
// random directions.
MEstimate estimate_M(const Barrier& b, double a, const std::vector<Vec>& samples,
                     DirectionMode mode, std::uint64_t seed = 0, int n_random_dirs = 8);

struct LevelStats {
  double a = 0.0;
  double grad_min = 0.0;
  double grad_max = 0.0;
  double m_tangent = 0.0;
  double m_all = 0.0;
  int n_samples = 0;
  int n_failures = 0;
};

enum class VerdictState { Pass, Fail, Indeterminate };

struct Verdict {
  VerdictState state = VerdictState::Indeterminate;
  double margin = 0.0;
  std::string reason;
};

struct BoxLevelSeries {
  Box box;
  std::vector<LevelStats> per_level;
};

struct FlowBoundsRecord {
  double a = 0.0;
  FlowBounds bounds;
};

struct HypothesisReport {
  std::vector<LevelStats> per_level;  // aggregated across boxes
  std::vector<BoxLevelSeries> boxes;
  std::vector<FlowBoundsRecord> flow;
  FlowBounds flow_bounds;  // max over levels
  std::map<std::string, Verdict> verdicts;
};

struct HypothesisConfig {
  std::vector<double> levels;  // empty: barrier's schedule
  Box sampling_box;
  int samples_per_level = 48;
  int n_random_dirs = 8;
  std::uint64_t seed = 0;

  // Neighbourhood boxes: explicit, or auto-centered on smallest-level samples.
  std::vector<Box> boxes;
  int n_boxes = 4;
  double box_halfwidth = -1.0;  // <0: 0.25 * max extent of sampling_box

  double m_tol = 1e-9;        // boundary-convexity tolerance
  double growth_ratio = 1.3;  // per-level ratio flagged as growth/decay
  double growth_total = 2.0;  // and total change over the window
  double grad_abs_floor = 1e-7;
  double grad_abs_cap = 1e7;

  int flow_samples = 12;
  bool run_flow_check = true;

  std::vector<std::string> checks = {"t0", "t1", "t2"};
  std::optional<ScalarField> gordon_h;  // candidate proper positive convex function
};

// Samples every schedule level inside each neighbourhood box, estimates
// gradient bounds and Hessian constants, measures flow derivative bounds from
// a band near the first level down to each deeper level, and renders verdicts.
// Deterministic: identical seed and config give a bit-identical report.
HypothesisReport check_hypotheses(const Barrier& b, const HypothesisConfig& cfg);

// Monotone reparametrisation of the barrier value.
struct Warp {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

// Validates H_{warp(phi)}[v,v] = warp'(phi) H_phi[v,v] on level tangents;
// returns the max normalized defect over samples and tangent directions.
double rescaling_check(const Barrier& b, const Warp& warp, double a,
                       const std::vector<Vec>& samples, std::uint64_t seed = 0);

const char* to_string(VerdictState s);

}  // namespace geodom
