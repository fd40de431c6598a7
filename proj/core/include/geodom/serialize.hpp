#pragma once

#include <string>
#include <vector>

#include "geodom/jacobi.hpp"
#include "geodom/problem.hpp"

namespace geodom {

inline constexpr const char* kToolVersion = "0.1.0";

// Shortest round-trip decimal formatting; artifacts are byte-stable.
std::string format_double(double v);

// One node per row: s, coordinates, phi, |xdot|_g.
std::string path_csv(const DiscretePath& path, const Barrier& b);

std::string stages_csv(const std::vector<StageRecord>& stages);

// Full report: diagnostics, per-stage history, nodes and winding data.
// `timestamp` is the only non-reproducible field; pass "" to omit.
std::string solve_report_json(const SolveReport& rep, const ProblemDef& def,
                              const std::string& timestamp);

std::string multiplicity_report_json(const MultiplicityResult& result, const ProblemDef& def,
                                     const std::string& timestamp);

std::string hypothesis_report_json(const HypothesisReport& rep, const ProblemDef& def,
                                   const std::string& timestamp);
std::string hypothesis_report_table(const HypothesisReport& rep);

// One sample per row: t, coordinates, |xdot|_g, energy.
std::string trajectory_csv(const Trajectory& traj, const ChartManifold& m);

struct JacobiRunSummary {
  RepCheckResult rep;
  double jhes_defect = 0.0;
  SolveReport solve;
  Trajectory trajectory;
};
std::string jacobi_report_json(const JacobiRunSummary& run, const ProblemDef& def,
                               const std::string& timestamp);

void write_file(const std::string& path, const std::string& content);
std::string iso_timestamp();

}  // namespace geodom
