// geodom CLI: penalized geodesic solves, convexity hypothesis checks and
// fixed-energy trajectory reduction, over problem-definition JSON files or
// builtin gallery problems.

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>

#include "geodom/serialize.hpp"

namespace {

using namespace geodom;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitCollapse = 3;
constexpr int kExitCheckFailed = 4;
constexpr int kExitIndeterminate = 5;
constexpr int kExitRepFailed = 6;

struct Overrides {
  std::int64_t seed = -1;
  double eps0 = -1.0;
  int k_nodes = -1;
  int levels = -1;
  std::string out_dir;
};

void apply_overrides(ProblemDef& def, const Overrides& ov) {
  if (ov.seed >= 0) {
    def.solver.seed = static_cast<std::uint64_t>(ov.seed);
    def.hypotheses.seed = static_cast<std::uint64_t>(ov.seed);
  }
  if (ov.eps0 > 0.0) def.solver.eps0 = ov.eps0;
  if (ov.k_nodes > 1) def.solver.k_nodes = ov.k_nodes;
  if (ov.levels > 0) def.barrier.level_count = ov.levels;
  canonicalize(def);
}

std::string out_dir_for(const ProblemDef& def, const Overrides& ov) {
  return ov.out_dir.empty() ? "geodom_out/" + def.name : ov.out_dir;
}

int exit_code_for(const SolveReport& rep) {
  if (rep.converged) return kExitOk;
  return rep.failure_reason == "boundary-collapse" ? kExitCollapse : kExitNotConverged;
}

int run_solve(const std::string& problem_arg, const Overrides& ov,
              std::ostream& out = std::cout) {
  Problem prob = load_problem(problem_arg);
  apply_overrides(prob.def, ov);
  prob.inst = instantiate(prob.def);
  const Barrier& b = *prob.inst.barrier;
  const std::string dir = out_dir_for(prob.def, ov);
  const std::string ts = iso_timestamp();

  if (!prob.def.classes.empty()) {
    std::vector<SeedDescriptor> classes;
    for (const SeedSpec& s : prob.def.classes) classes.push_back(to_seed(s));
    MultiplicityResult result =
        solve_multiplicity(prob.def.p, prob.def.q, b, prob.def.solver, classes);
    write_file(dir + "/report.json", multiplicity_report_json(result, prob.def, ts));
    for (std::size_t i = 0; i < result.geodesics.size(); ++i) {
      write_file(dir + "/path_" + std::to_string(i) + ".csv",
                 path_csv(result.geodesics[i].path, b));
    }
    out << prob.def.name << ": " << result.geodesics.size() << " geodesic(s), "
        << result.dropped.size() << " dropped; artifacts in " << dir << "\n";
    for (const SolveReport& rep : result.geodesics) {
      out << "  f = " << format_double(rep.f_value) << "  [" << rep.seed_label << "]\n";
    }
    if (!result.geodesics.empty()) return kExitOk;
    for (const SolveReport& rep : result.dropped) {
      if (rep.failure_reason == "boundary-collapse") return kExitCollapse;
    }
    return kExitNotConverged;
  }

  SolveReport rep = solve(prob.def.p, prob.def.q, b, prob.def.solver, to_seed(prob.def.init));
  write_file(dir + "/report.json", solve_report_json(rep, prob.def, ts));
  write_file(dir + "/path.csv", path_csv(rep.path, b));
  write_file(dir + "/stages.csv", stages_csv(rep.stages));
  out << prob.def.name << ": " << (rep.converged ? "converged" : rep.failure_reason)
      << ", f = " << format_double(rep.f_value) << ", beta = " << format_double(rep.beta)
      << "; artifacts in " << dir << "\n";
  return exit_code_for(rep);
}

int run_check(const std::string& problem_arg, const Overrides& ov,
              std::ostream& out = std::cout) {
  Problem prob = load_problem(problem_arg);
  apply_overrides(prob.def, ov);
  prob.inst = instantiate(prob.def);
  HypothesisConfig cfg = build_hypothesis_config(prob.def, prob.inst);
  HypothesisReport rep = check_hypotheses(*prob.inst.barrier, cfg);

  const std::string dir = out_dir_for(prob.def, ov);
  write_file(dir + "/hypotheses.json", hypothesis_report_json(rep, prob.def, iso_timestamp()));
  write_file(dir + "/hypotheses.txt", hypothesis_report_table(rep));
  out << hypothesis_report_table(rep);

  bool any_fail = false, any_indeterminate = false;
  for (const std::string& name : cfg.checks) {
    auto it = rep.verdicts.find(name);
    if (it == rep.verdicts.end()) {
      any_indeterminate = true;
      continue;
    }
    if (it->second.state == VerdictState::Fail) any_fail = true;
    if (it->second.state == VerdictState::Indeterminate) any_indeterminate = true;
  }
  if (any_fail) return kExitCheckFailed;
  if (any_indeterminate) return kExitIndeterminate;
  return kExitOk;
}

int run_jacobi(const std::string& problem_arg, const Overrides& ov,
               std::ostream& out = std::cout) {
  Problem prob = load_problem(problem_arg);
  apply_overrides(prob.def, ov);
  prob.inst = instantiate(prob.def);
  if (!prob.def.lagrangian || !prob.inst.lagrangian) {
    throw InputError("problem has no lagrangian block");
  }
  const LagrangianSpec& spec = *prob.def.lagrangian;
  const LagrangianProblem& lag = *prob.inst.lagrangian;

  // Energy level must clear the potential along the seed path.
  {
    DiscretePath straight = DiscretePath::line(prob.def.p, prob.def.q, 64);
    for (int i = 0; i <= straight.segments(); ++i) {
      const double v = lag.potential.value(straight.node(i));
      if (!(lag.energy > v)) {
        throw EnergyLevelError("E = " + format_double(lag.energy) +
                               " does not exceed V = " + format_double(v) +
                               " on the straight seed path");
      }
    }
  }

  JacobiRunSummary run;
  const Box box = spec.has_box ? spec.sample_box : prob.def.hypotheses.sampling_box;
  const std::vector<double> levels =
      spec.rep_levels.empty() ? prob.inst.barrier->level_schedule() : spec.rep_levels;
  run.rep = rep_check(lag, *prob.inst.barrier, levels, spec.rep_samples,
                      prob.def.solver.seed, box);

  {
    Rng rng(prob.def.solver.seed ^ 0xa5a5a5a5u);
    std::vector<Vec> samples;
    int guard = 0;
    while (static_cast<int>(samples.size()) < spec.jhes_samples && guard < 1000 * spec.jhes_samples) {
      ++guard;
      const Vec x = rng.in_box(box);
      if (prob.inst.barrier->inside(x) && lag.energy > lag.potential.value(x)) {
        samples.push_back(x);
      }
    }
    run.jhes_defect = hessian_transform_check(lag, *prob.inst.barrier, samples, spec.jhes_dirs,
                                              prob.def.solver.seed ^ 0x5a5a5a5au);
  }

  auto conf = jacobi_metric(lag);
  Barrier conf_barrier = prob.inst.barrier->rebind(conf);
  SolverConfig cfg = prob.def.solver;
  if (spec.k_nodes > 1) cfg.k_nodes = spec.k_nodes;
  run.solve = solve(prob.def.p, prob.def.q, conf_barrier, cfg, to_seed(prob.def.init));
  if (run.solve.converged) {
    run.trajectory = trajectory_from_geodesic(lag, run.solve.path);
  }

  const std::string dir = out_dir_for(prob.def, ov);
  write_file(dir + "/jacobi_report.json", jacobi_report_json(run, prob.def, iso_timestamp()));
  if (run.solve.converged) {
    write_file(dir + "/trajectory.csv", trajectory_csv(run.trajectory, *prob.inst.manifold));
  }
  out << prob.def.name << ": rep-check " << (run.rep.pass ? "pass" : "FAIL")
      << " (M' = " << format_double(run.rep.m_prime)
      << "), jhes defect = " << format_double(run.jhes_defect) << ", solve "
      << (run.solve.converged ? "converged" : run.solve.failure_reason)
      << "; artifacts in " << dir << "\n";

  if (!run.solve.converged) return exit_code_for(run.solve);
  if (!run.trajectory.ok) return kExitNotConverged;
  if (!run.rep.pass) return kExitRepFailed;  // warning level: solve already done
  return kExitOk;
}

int worker_pool_size() {
  if (const char* env = std::getenv("GEODOM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

int run_gallery_all(const Overrides& ov) {
  const std::vector<std::string> names = gallery_names();
  std::vector<std::string> summaries(names.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> had_error{false};

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= names.size()) return;
      Overrides local = ov;
      const std::string root = ov.out_dir.empty() ? "geodom_out" : ov.out_dir;
      local.out_dir = root + "/" + names[i];
      std::ostringstream line;
      line << names[i] << ":";
      try {
        Problem probe = load_problem(names[i]);
        std::ostringstream sink;  // per-problem output stays out of the summary
        if (probe.def.lagrangian) {
          line << " jacobi exit " << run_jacobi(names[i], local, sink);
        } else {
          line << " solve exit " << run_solve(names[i], local, sink);
        }
        if (probe.def.hypotheses.has_box) {
          line << ", check exit " << run_check(names[i], local, sink);
        }
      } catch (const std::exception& e) {
        line << " error: " << e.what();
        had_error = true;
      }
      summaries[i] = line.str();
    }
  };

  std::vector<std::thread> pool;
  const int nw = std::min<int>(worker_pool_size(), static_cast<int>(names.size()));
  for (int w = 0; w < nw; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();

  for (const std::string& s : summaries) std::cout << s << "\n";
  return had_error ? kExitInput : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodom: geodesics in open domains via barrier penalization"};
  app.require_subcommand(1);

  std::string problem_arg;
  Overrides ov;
  std::string show_name;

  auto add_common = [&](CLI::App* cmd, bool with_solver_flags) {
    cmd->add_option("problem", problem_arg, "problem JSON file or gallery name")->required();
    cmd->add_option("--seed", ov.seed, "override RNG seed");
    cmd->add_option("--out-dir", ov.out_dir, "artifact directory");
    if (with_solver_flags) {
      cmd->add_option("--eps0", ov.eps0, "override initial penalty weight");
      cmd->add_option("--k-nodes", ov.k_nodes, "override path segment count");
    }
    cmd->add_option("--levels", ov.levels, "override level schedule length");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "minimize the penalized action");
  add_common(solve_cmd, true);
  CLI::App* check_cmd =
      app.add_subcommand("check-hypotheses", "certify convexity hypotheses by sampling");
  add_common(check_cmd, false);
  CLI::App* jacobi_cmd =
      app.add_subcommand("jacobi", "fixed-energy trajectory via the conformal metric");
  add_common(jacobi_cmd, true);

  CLI::App* gallery_cmd = app.add_subcommand("gallery", "builtin problem library");
  CLI::App* list_cmd = gallery_cmd->add_subcommand("list", "list builtin problems");
  CLI::App* show_cmd = gallery_cmd->add_subcommand("show", "print a builtin definition");
  show_cmd->add_option("name", show_name, "gallery problem name")->required();
  CLI::App* runall_cmd = gallery_cmd->add_subcommand("run-all", "run every builtin problem");
  runall_cmd->add_option("--out-dir", ov.out_dir, "artifact root directory");
  gallery_cmd->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(problem_arg, ov);
    if (check_cmd->parsed()) return run_check(problem_arg, ov);
    if (jacobi_cmd->parsed()) return run_jacobi(problem_arg, ov);
    if (list_cmd->parsed()) {
      for (const std::string& name : geodom::gallery_names()) std::cout << name << "\n";
      return kExitOk;
    }
    if (show_cmd->parsed()) {
      std::cout << geodom::gallery_def_text(show_name) << "\n";
      return kExitOk;
    }
    if (runall_cmd->parsed()) return run_gallery_all(ov);
  } catch (const geodom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
