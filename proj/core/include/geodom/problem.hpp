#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geodom/convexity.hpp"
#include "geodom/gallery.hpp"
#include "geodom/solver.hpp"

namespace geodom {

struct ManifoldSpec {
  std::string name = "euclidean";
  ParamMap params;
  std::optional<PotentialSpec> potential;  // for "conformal"
};

struct BarrierSpec {
  std::string name;
  ParamMap params;
  double a0 = 0.5;
  int level_count = 6;
};

struct SeedSpec {
  std::vector<int> winding;
  std::optional<Vec> via;
  std::string label;
};

struct HypothesisSpec {
  Box sampling_box;
  bool has_box = false;
  std::vector<double> levels;  // empty: barrier schedule
  int samples_per_level = 48;
  int n_random_dirs = 8;
  std::uint64_t seed = 0;
  int n_boxes = 4;
  double box_halfwidth = -1.0;
  int flow_samples = 12;
  bool run_flow_check = true;
  std::vector<std::string> checks = {"t0", "t1", "t2"};
  std::string gordon_h;  // "", "inv_phi" or "phi"
};

struct LagrangianSpec {
  PotentialSpec potential;
  double energy = 1.0;
  Box sample_box;
  bool has_box = false;
  int k_nodes = 0;  // 0: inherit solver.k_nodes
  std::vector<double> rep_levels;
  int rep_samples = 24;
  int jhes_samples = 50;
  int jhes_dirs = 4;
};

// Parsed, normalized problem definition. `canonical` is the defaults-filled
// JSON with sorted keys; `hash` its FNV-1a digest (stable across reruns).
struct ProblemDef {
  int version = 1;
  std::string name;
  ManifoldSpec manifold;
  BarrierSpec barrier;
  Vec p, q;
  SolverConfig solver;
  SeedSpec init;
  std::vector<SeedSpec> classes;
  HypothesisSpec hypotheses;
  std::optional<LagrangianSpec> lagrangian;
  std::string canonical;
  std::string hash;
};

struct ProblemInstance {
  std::shared_ptr<ChartManifold> manifold;
  std::shared_ptr<Barrier> barrier;
  std::optional<LagrangianProblem> lagrangian;
};

struct Problem {
  ProblemDef def;
  ProblemInstance inst;
};

// Parse and validate a definition; messages carry line/field locations.
ProblemDef parse_problem_text(const std::string& text, const std::string& origin);

// Fill `canonical` and `hash` from the current field values.
void canonicalize(ProblemDef& def);

ProblemInstance instantiate(const ProblemDef& def);

// File path, or a builtin gallery name when no such file exists.
// Endpoint membership (phi > 0) is validated here.
Problem load_problem(const std::string& path_or_gallery);

std::vector<std::string> gallery_names();
const std::string& gallery_def_text(const std::string& name);

HypothesisConfig build_hypothesis_config(const ProblemDef& def, const ProblemInstance& inst);
SeedDescriptor to_seed(const SeedSpec& s);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace geodom
