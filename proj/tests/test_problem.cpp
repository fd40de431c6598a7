#include <doctest.h>

#include <json.hpp>

#include <fstream>

#include "geodom/jacobi.hpp"
#include "geodom/problem.hpp"
#include "geodom/serialize.hpp"

using namespace geodom;
using nlohmann::json;

#ifndef GEODOM_FIXTURE_DIR
#define GEODOM_FIXTURE_DIR "."
#endif

namespace {

const char* kMinimalDef = R"({
  "version": 1,
  "name": "mini",
  "manifold": {"name": "euclidean", "params": {"dim": 2}},
  "barrier": {"name": "half_plane_y"},
  "endpoints": {"p": [0.0, 1.0], "q": [1.0, 1.0]}
})";

}  // namespace

TEST_CASE("problem definition parsing") {
  SUBCASE("minimal definition fills defaults") {
    const ProblemDef def = parse_problem_text(kMinimalDef, "<test>");
    CHECK(def.name == "mini");
    CHECK(def.solver.eps0 == 0.5);
    CHECK(def.solver.k_nodes == 100);
    CHECK(def.barrier.a0 == 0.5);
    CHECK(def.barrier.level_count == 6);
    CHECK(!def.hash.empty());
  }
  SUBCASE("parse errors carry the line") {
    const std::string broken = "{\n  \"version\": 1,\n  \"oops\n}";
    try {
      parse_problem_text(broken, "f.json");
      FAIL("expected parse error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("f.json: line") != std::string::npos);
    }
  }
  SUBCASE("field errors carry the path") {
    try {
      parse_problem_text(R"({"version": 1, "manifold": {"name": "euclidean"},
                             "barrier": {"name": "half_plane_y"},
                             "endpoints": {"p": [0, 1], "q": "oops"}})",
                         "<t>");
      FAIL("expected field error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("/endpoints/q") != std::string::npos);
    }
  }
  SUBCASE("solver constraints are enforced at parse time") {
    CHECK_THROWS_AS(parse_problem_text(R"({"version": 1, "name": "x",
      "manifold": {"name": "euclidean"}, "barrier": {"name": "half_plane_y"},
      "endpoints": {"p": [0,1], "q": [1,1]}, "solver": {"eps0": 2.0}})",
                                       "<t>"),
                    InputError);
  }
  SUBCASE("unknown builtin names are input errors") {
    ProblemDef def = parse_problem_text(kMinimalDef, "<t>");
    def.manifold.name = "nope";
    CHECK_THROWS_AS(instantiate(def), InputError);
    def = parse_problem_text(kMinimalDef, "<t>");
    def.barrier.name = "nope";
    CHECK_THROWS_AS(instantiate(def), InputError);
  }
}

TEST_CASE("endpoint membership is validated at load") {
  const std::string path = std::string(GEODOM_FIXTURE_DIR) + "/bad_endpoint.json";
  {
    std::ofstream out(path);
    out << R"({"version": 1, "name": "bad",
      "manifold": {"name": "euclidean", "params": {"dim": 2}},
      "barrier": {"name": "half_plane_y"},
      "endpoints": {"p": [0.0, 0.0], "q": [1.0, 1.0]}})";
  }
  try {
    load_problem(path);
    FAIL("expected endpoint rejection");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("endpoint p") != std::string::npos);
  }
}

TEST_CASE("canonical hash") {
  SUBCASE("stable across reparsing") {
    const ProblemDef a = parse_problem_text(kMinimalDef, "<t>");
    const ProblemDef b = parse_problem_text(a.canonical, "<t>");
    CHECK(a.hash == b.hash);
  }
  SUBCASE("key order does not matter") {
    const char* reordered = R"({
      "endpoints": {"q": [1.0, 1.0], "p": [0.0, 1.0]},
      "barrier": {"name": "half_plane_y"},
      "manifold": {"params": {"dim": 2}, "name": "euclidean"},
      "name": "mini",
      "version": 1
    })";
    CHECK(parse_problem_text(kMinimalDef, "<t>").hash ==
          parse_problem_text(reordered, "<t>").hash);
  }
  SUBCASE("seed changes the hash") {
    ProblemDef def = parse_problem_text(kMinimalDef, "<t>");
    const std::string h0 = def.hash;
    def.solver.seed = 99;
    canonicalize(def);
    CHECK(def.hash != h0);
  }
}

TEST_CASE("artifact determinism") {
  Problem prob = load_problem("quadrant_sqrtxy");
  SolverConfig cfg = prob.def.solver;
  cfg.k_nodes = 40;  // keep this test quick
  const SolveReport a = solve(prob.def.p, prob.def.q, *prob.inst.barrier, cfg);
  const SolveReport b = solve(prob.def.p, prob.def.q, *prob.inst.barrier, cfg);
  CHECK(path_csv(a.path, *prob.inst.barrier) == path_csv(b.path, *prob.inst.barrier));
  CHECK(stages_csv(a.stages) == stages_csv(b.stages));
  CHECK(solve_report_json(a, prob.def, "") == solve_report_json(b, prob.def, ""));

  SUBCASE("csv layout: s first, then coordinates, then diagnostics") {
    const std::string csv = path_csv(a.path, *prob.inst.barrier);
    CHECK(csv.rfind("s,x0,x1,phi,speed\n", 0) == 0);
  }
}

TEST_CASE("gallery definitions all load and instantiate") {
  for (const std::string& name : gallery_names()) {
    CAPTURE(name);
    const Problem prob = load_problem(name);
    CHECK(prob.def.name == name);
    CHECK(prob.inst.barrier->inside(prob.def.p));
    CHECK(prob.inst.barrier->inside(prob.def.q));
  }
}

TEST_CASE("gallery fixture replay") {
  std::ifstream in(std::string(GEODOM_FIXTURE_DIR) + "/gallery_expected.json");
  REQUIRE(in);
  json fixtures;
  in >> fixtures;

  for (const auto& [name, expected] : fixtures.items()) {
    CAPTURE(name);
    Problem prob = load_problem(name);
    const Barrier& barrier = *prob.inst.barrier;

    if (expected.contains("solve")) {
      const json& exp = expected["solve"];
      const SolveReport rep =
          solve(prob.def.p, prob.def.q, barrier, prob.def.solver, to_seed(prob.def.init));
      CHECK(rep.converged == exp["converged"].get<bool>());
      if (exp.contains("f")) {
        CHECK(rep.f_value == doctest::Approx(exp["f"].get<double>())
                                 .epsilon(exp.value("f_rtol", 1e-6)));
      }
      if (exp.contains("beta_min")) CHECK(rep.beta >= exp["beta_min"].get<double>());
      if (exp.contains("failure_reason")) {
        CHECK(rep.failure_reason == exp["failure_reason"].get<std::string>());
      }
    }
    if (expected.contains("multiplicity")) {
      const json& exp = expected["multiplicity"];
      std::vector<SeedDescriptor> classes;
      for (const SeedSpec& s : prob.def.classes) classes.push_back(to_seed(s));
      const MultiplicityResult r =
          solve_multiplicity(prob.def.p, prob.def.q, barrier, prob.def.solver, classes);
      CHECK(static_cast<int>(r.geodesics.size()) == exp["count"].get<int>());
      if (exp.contains("f")) {
        const auto fs = exp["f"].get<std::vector<double>>();
        REQUIRE(fs.size() <= r.geodesics.size());
        for (std::size_t i = 0; i < fs.size(); ++i) {
          CHECK(r.geodesics[i].f_value ==
                doctest::Approx(fs[i]).epsilon(exp.value("f_rtol", 1e-6)));
        }
      }
      if (exp.value("strictly_increasing", false)) {
        for (std::size_t i = 1; i < r.geodesics.size(); ++i) {
          CHECK(r.geodesics[i].f_value > r.geodesics[i - 1].f_value);
        }
      }
      if (exp.contains("min_separation")) {
        double sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < r.geodesics.size(); ++i) {
          for (std::size_t j = i + 1; j < r.geodesics.size(); ++j) {
            sep = std::min(sep, path_separation(r.geodesics[i].path, r.geodesics[j].path));
          }
        }
        CHECK(sep > exp["min_separation"].get<double>());
      }
    }
    if (expected.contains("check")) {
      const HypothesisConfig cfg = build_hypothesis_config(prob.def, prob.inst);
      const HypothesisReport rep = check_hypotheses(barrier, cfg);
      for (const auto& [verdict, state] : expected["check"].items()) {
        CAPTURE(verdict);
        REQUIRE(rep.verdicts.count(verdict) == 1);
        CHECK(to_string(rep.verdicts.at(verdict).state) == state.get<std::string>());
      }
    }
    if (expected.contains("jacobi")) {
      const json& exp = expected["jacobi"];
      REQUIRE(prob.inst.lagrangian.has_value());
      const LagrangianProblem& lag = *prob.inst.lagrangian;
      const LagrangianSpec& spec = *prob.def.lagrangian;
      const RepCheckResult rc =
          rep_check(lag, barrier, spec.rep_levels, spec.rep_samples, prob.def.solver.seed,
                    spec.sample_box);
      CHECK(rc.pass == exp["rep_pass"].get<bool>());
      auto conf = jacobi_metric(lag);
      const Barrier cb = barrier.rebind(conf);
      SolverConfig cfg = prob.def.solver;
      if (spec.k_nodes > 1) cfg.k_nodes = spec.k_nodes;
      const SolveReport rep = solve(prob.def.p, prob.def.q, cb, cfg, to_seed(prob.def.init));
      CHECK(rep.converged == exp["converged"].get<bool>());
      if (rep.converged) {
        const Trajectory traj = trajectory_from_geodesic(lag, rep.path);
        CHECK(traj.ok);
        if (exp.contains("energy_spread_max")) {
          CHECK(traj.energy_spread < exp["energy_spread_max"].get<double>());
        }
      }
      if (exp.contains("jhes_max")) {
        Rng rng(99);
        std::vector<Vec> samples;
        while (samples.size() < 30) {
          const Vec x = rng.in_box(spec.sample_box);
          if (barrier.inside(x) && lag.energy > lag.potential.value(x)) samples.push_back(x);
        }
        CHECK(hessian_transform_check(lag, barrier, samples, 4, 5) <
              exp["jhes_max"].get<double>());
      }
    }
  }
}
