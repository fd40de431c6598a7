// Acceptance suite: end-to-end checks of the solver, the hypothesis
// certification and the fixed-energy reduction against closed forms and
// independent oracles. Prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "geodom/jacobi.hpp"
#include "geodom/problem.hpp"
#include "geodom/serialize.hpp"
#include "oracles.hpp"

using namespace geodom;

namespace {

int g_failures = 0;

struct Criterion {
  explicit Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {
    start_ = std::chrono::steady_clock::now();
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) issues_.push_back(what);
  }
  void expect_close(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os << what << " (got " << got << ", want " << want << " +- " << tol << ")";
    expect(std::abs(got - want) <= tol, os.str());
  }
  void expect_lt(double got, double bound, const std::string& what) {
    std::ostringstream os;
    os << what << " (got " << got << ", bound " << bound << ")";
    expect(got < bound, os.str());
  }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  void runtime_below(double seconds) {
    std::ostringstream os;
    os << "runtime " << elapsed() << " s exceeds " << seconds << " s";
    expect(elapsed() < seconds, os.str());
  }
  ~Criterion() {
    if (issues_.empty()) {
      std::printf("[PASS] criterion %2d: %s (%.2f s)\n", id_, title_.c_str(), elapsed());
    } else {
      ++g_failures;
      std::printf("[FAIL] criterion %2d: %s\n", id_, title_.c_str());
      for (const std::string& s : issues_) std::printf("         - %s\n", s.c_str());
    }
    std::fflush(stdout);
  }
  int id_;
  std::string title_;
  std::vector<std::string> issues_;
  std::chrono::steady_clock::time_point start_;
};

DiscretePath wiggled_path(const Problem& prob, Rng& rng, int k_nodes) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    SolverConfig cfg = prob.def.solver;
    cfg.k_nodes = k_nodes;
    DiscretePath path = seed_path(prob.def.p, prob.def.q, *prob.inst.barrier, cfg,
                                  to_seed(prob.def.init));
    const double scale = 0.02 * (prob.def.q - prob.def.p).norm() + 0.01;
    for (int i = 1; i < path.segments(); ++i) {
      for (int d = 0; d < path.dim(); ++d) {
        path.nodes(i, d) += scale * rng.uniform(-1.0, 1.0);
      }
    }
    bool ok = true;
    for (int i = 0; i <= path.segments() && ok; ++i) {
      ok = prob.inst.barrier->inside(path.node(i));
    }
    if (ok) return path;
  }
  throw Error("could not build a wiggled in-domain path");
}

void criterion_gradient_correctness() {
  Criterion c(1, "analytic path gradient vs central differences on 100 random paths");
  const std::vector<std::string> names = {
      "quadrant_sqrtxy", "quadrant_xy",       "half_plane",   "unit_disk",
      "half_plane_wavy", "cylinder_minus_helix", "punctured_plane",
      "flat_cylinder_winding", "punctured_euclidean", "cylinder_minus_helix_perturbed"};
  std::vector<Problem> probs;
  for (const auto& n : names) probs.push_back(load_problem(n));
  Rng rng(1234);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Problem& prob = probs[trial % probs.size()];
    const Barrier& b = *prob.inst.barrier;
    const DiscretePath path = wiggled_path(prob, rng, 20);
    const double eps = 0.25;
    const PathEval ev = penalized_energy(path, b, eps);
    for (int i = 1; i < path.segments(); ++i) {
      for (int d = 0; d < path.dim(); ++d) {
        const double h = 1e-6;
        DiscretePath pp = path, pm = path;
        pp.nodes(i, d) += h;
        pm.nodes(i, d) -= h;
        const double fd = (penalized_energy(pp, b, eps, false).f_eps() -
                           penalized_energy(pm, b, eps, false).f_eps()) /
                          (2.0 * h);
        worst = std::max(worst, std::abs(fd - ev.grad(i - 1, d)) /
                                    std::max(1.0, std::abs(ev.grad(i - 1, d))));
      }
    }
  }
  c.expect_lt(worst, 1e-5, "max relative gradient error");
  c.runtime_below(30.0);
}

void criterion_flow_first_integral() {
  Criterion c(2, "normalized flow decreases phi at unit rate on every gallery barrier");
  struct Setup {
    std::string name;
    Barrier barrier;
    Box box;
  };
  auto euc = make_metric("euclidean", {{"dim", 2}});
  auto pol = make_metric("polar_inverse_r2", {});
  auto cyl = make_metric("flat_cylinder", {});
  std::vector<Setup> setups;
  setups.push_back({"sqrt_xy", Barrier(euc, make_barrier_field("sqrt_xy", {})),
                    Box{Vec{{0.2, 0.2}}, Vec{{3.0, 3.0}}}});
  setups.push_back({"xy", Barrier(euc, make_barrier_field("xy", {})),
                    Box{Vec{{0.2, 0.2}}, Vec{{3.0, 3.0}}}});
  setups.push_back({"half_plane_y", Barrier(euc, make_barrier_field("half_plane_y", {})),
                    Box{Vec{{-2.0, 0.3}}, Vec{{2.0, 3.0}}}});
  setups.push_back({"unit_disk", Barrier(euc, make_barrier_field("unit_disk", {})),
                    Box{Vec{{-0.6, -0.6}}, Vec{{0.6, 0.6}}}});
  setups.push_back({"wavy_half_plane", Barrier(euc, make_barrier_field("wavy_half_plane", {})),
                    Box{Vec{{-3.0, 1.0}}, Vec{{3.0, 3.0}}}});
  setups.push_back({"radial_euclidean", Barrier(euc, make_barrier_field("radial_euclidean", {})),
                    Box{Vec{{0.2, 0.2}}, Vec{{2.0, 2.0}}}});
  setups.push_back({"radial_r", Barrier(pol, make_barrier_field("radial_r", {})),
                    Box{Vec{{0.5, -3.0}}, Vec{{3.0, 3.0}}}});
  setups.push_back(
      {"dist_to_helix",
       Barrier(cyl, make_barrier_field("dist_to_helix", {{"pitch", 1.0}, {"width", 0.3}})),
       Box{Vec{{0.0, 0.02}}, Vec{{6.28, 0.2}}}});

  for (const Setup& s : setups) {
    Rng rng(42);
    double worst = 0.0;
    int done = 0, guard = 0;
    while (done < 1000 && guard < 100000) {
      ++guard;
      const Vec x = rng.in_box(s.box);
      if (!s.barrier.inside(x)) continue;
      const double phi = s.barrier.value(x);
      const double smax = 0.8 * phi;
      const double t = rng.uniform(0.0, smax);
      try {
        const Vec y = flow(s.barrier, x, t);
        worst = std::max(worst, std::abs(s.barrier.value(y) - (phi - t)));
        ++done;
      } catch (const DegenerateGradientError&) {
        continue;  // capped plateau of the helix barrier
      }
    }
    c.expect(done == 1000, s.name + ": not enough usable samples");
    c.expect_lt(worst, 1e-7, s.name + ": first-integral defect");
  }

  // closed form on the punctured plane
  const Barrier b(pol, make_barrier_field("radial_r", {}));
  Rng rng(7);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Vec x{{rng.uniform(0.5, 3.0), rng.uniform(-3.0, 3.0)}};
    const double t = rng.uniform(0.0, 0.8 * x[0]);
    const Vec y = flow(b, x, t);
    worst = std::max(worst, (y - Vec{{x[0] - t, x[1]}}).cwiseAbs().maxCoeff());
  }
  c.expect_lt(worst, 1e-8, "punctured plane flow vs closed form (r - s, theta)");
}

void criterion_gradient_norm_formulas() {
  Criterion c(3, "quadrant gradient-norm formulas and barrier bound pattern");
  auto euc = make_metric("euclidean", {{"dim", 2}});
  const ScalarField sqrt_xy = make_barrier_field("sqrt_xy", {});
  const ScalarField xy = make_barrier_field("xy", {});
  Rng rng(3);
  double worst_sqrt = 0.0, worst_xy = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Vec x{{rng.uniform(0.05, 4.0), rng.uniform(0.05, 4.0)}};
    const TangentVector g1 = euc->riem_grad(sqrt_xy, x);
    const double n1 = euc->inner(x, g1.comps, g1.comps);
    const double want1 = (x[0] * x[0] + x[1] * x[1]) / (4.0 * x[0] * x[1]);
    worst_sqrt = std::max(worst_sqrt, std::abs(n1 - want1) / want1);
    const TangentVector g2 = euc->riem_grad(xy, x);
    const double n2 = euc->inner(x, g2.comps, g2.comps);
    const double want2 = x[0] * x[0] + x[1] * x[1];
    worst_xy = std::max(worst_xy, std::abs(n2 - want2) / want2);
  }
  c.expect_lt(worst_sqrt, 1e-8, "|grad sqrt(xy)|^2 = (x^2+y^2)/(4xy)");
  c.expect_lt(worst_xy, 1e-8, "|grad xy|^2 = x^2+y^2");

  Problem sq = load_problem("quadrant_sqrtxy");
  const HypothesisReport rep_sq =
      check_hypotheses(*sq.inst.barrier, build_hypothesis_config(sq.def, sq.inst));
  c.expect(rep_sq.verdicts.at("grad_lower").state == VerdictState::Pass,
           "sqrt(xy): lower gradient bound should hold");
  c.expect(rep_sq.verdicts.at("grad_upper").state == VerdictState::Fail,
           "sqrt(xy): upper gradient bound should fail");

  Problem pxy = load_problem("quadrant_xy");
  const HypothesisReport rep_xy =
      check_hypotheses(*pxy.inst.barrier, build_hypothesis_config(pxy.def, pxy.inst));
  c.expect(rep_xy.verdicts.at("grad_upper").state == VerdictState::Pass,
           "xy: upper gradient bound should hold locally");
  c.expect(rep_xy.verdicts.at("grad_lower").state == VerdictState::Fail,
           "xy: lower gradient bound should fail");
}

void criterion_punctured_plane_pattern() {
  Criterion c(4, "punctured plane: all-directions check passes, flow bound blocks the other");
  Problem prob = load_problem("punctured_plane");
  const HypothesisConfig cfg = build_hypothesis_config(prob.def, prob.inst);
  const HypothesisReport rep = check_hypotheses(*prob.inst.barrier, cfg);
  c.expect(rep.verdicts.at("t2").state == VerdictState::Pass, "t2 should pass");
  c.expect(rep.verdicts.at("t1").state != VerdictState::Pass,
           "t1 should fail or stay indeterminate");
  c.expect(rep.verdicts.at("flow_metric").state == VerdictState::Fail,
           "metric-weighted flow bound should fail");
  c.expect(rep.verdicts.at("flow_chart").state == VerdictState::Pass,
           "chart flow bound should pass");
  const HypothesisReport rep2 = check_hypotheses(*prob.inst.barrier, cfg);
  c.expect(hypothesis_report_json(rep, prob.def, "") == hypothesis_report_json(rep2, prob.def, ""),
           "report must be deterministic for a fixed seed");
}

void criterion_quadrant_solve() {
  Criterion c(5, "quadrant solve matches the straight-segment oracle at K=200");
  Problem prob = load_problem("quadrant_sqrtxy");
  const SolveReport rep =
      solve(prob.def.p, prob.def.q, *prob.inst.barrier, prob.def.solver, to_seed(prob.def.init));
  c.expect(rep.converged, "solver should converge");
  c.expect(prob.def.solver.k_nodes == 200, "gallery problem pins K=200");
  c.expect_close(rep.f_value, 1.0, 1e-3, "f = |q-p|^2/2");
  double dev = 0.0, min_phi = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= rep.path.segments(); ++i) {
    const Vec x = rep.path.node(i);
    dev = std::max(dev, std::abs(x[0] + x[1] - 3.0) / std::sqrt(2.0));
    min_phi = std::min(min_phi, prob.inst.barrier->value(x));
  }
  c.expect_lt(dev, 1e-3, "max node deviation from the straight segment");
  c.expect_lt(rep.stages.back().e_spread, 1e-4, "first-integral spread");
  c.expect(min_phi >= 0.9, "min phi along the path should stay above 0.9");
  c.runtime_below(10.0);
}

void criterion_dijkstra_oracle() {
  Criterion c(6, "helix-complement geodesic length within the Dijkstra oracle bracket");
  Problem prob = load_problem("cylinder_minus_helix");
  const SolveReport rep =
      solve(prob.def.p, prob.def.q, *prob.inst.barrier, prob.def.solver, to_seed(prob.def.init));
  c.expect(rep.converged, "solver should converge");
  c.expect(rep.beta >= 0.05, "min phi bound");
  const double len = path_length(rep.path, *prob.inst.manifold);

  oracles::CylinderGrid grid;
  grid.n_theta = 400;
  grid.n_z = 400;
  grid.z_lo = prob.def.p[1] - 0.8;
  grid.z_hi = prob.def.q[1] + 0.8;
  grid.pitch = 1.0;
  const double ref = grid.shortest_path(prob.def.p[0], prob.def.p[1],
                                        prob.def.q[0], prob.def.q[1]);
  std::ostringstream os;
  os << "length " << len << " vs oracle " << ref;
  c.expect(len <= 1.005 * ref && len >= 0.9 * ref, os.str() + " outside [0.9, 1.005] bracket");
  c.runtime_below(60.0);
}

void criterion_multiplicity() {
  Criterion c(7, "winding actions on the cylinder and multiplicity on the perturbed complement");
  {
    Problem prob = load_problem("flat_cylinder_winding");
    std::vector<SeedDescriptor> classes;
    for (const SeedSpec& s : prob.def.classes) classes.push_back(to_seed(s));
    const MultiplicityResult r =
        solve_multiplicity(prob.def.p, prob.def.q, *prob.inst.barrier, prob.def.solver, classes);
    c.expect(r.geodesics.size() == 3, "three winding classes should converge");
    const double pi2 = M_PI * M_PI;
    const double want[3] = {0.5, 0.5 * (1.0 + 4.0 * pi2), 0.5 * (1.0 + 16.0 * pi2)};
    for (std::size_t i = 0; i < r.geodesics.size() && i < 3; ++i) {
      c.expect(std::abs(r.geodesics[i].f_value - want[i]) <= 1e-3 * want[i],
               "winding action should match the closed form");
    }
  }
  {
    Problem prob = load_problem("cylinder_minus_helix_perturbed");
    std::vector<SeedDescriptor> classes;
    for (const SeedSpec& s : prob.def.classes) classes.push_back(to_seed(s));
    const MultiplicityResult r =
        solve_multiplicity(prob.def.p, prob.def.q, *prob.inst.barrier, prob.def.solver, classes);
    // distinct converged geodesics (node separation beyond solver precision)
    std::vector<const SolveReport*> distinct;
    for (const SolveReport& g : r.geodesics) {
      bool repeat = false;
      for (const SolveReport* d : distinct) {
        if (path_separation(d->path, g.path) < 1e-3) repeat = true;
      }
      if (!repeat) distinct.push_back(&g);
    }
    c.expect(distinct.size() >= 2, "at least two distinct geodesics expected");
    for (std::size_t i = 1; i < distinct.size(); ++i) {
      c.expect(distinct[i]->f_value > distinct[i - 1]->f_value + 1e-9,
               "actions should be strictly increasing");
    }
    // the shortest route should agree with the global graph oracle
    if (!r.geodesics.empty()) {
      HelixGeometry geom{1.0};
      oracles::CylinderGrid grid;
      grid.n_theta = 400;
      grid.n_z = 400;
      grid.z_lo = prob.def.p[1] - 2.5;
      grid.z_hi = prob.def.q[1] + 2.5;
      grid.pitch = 1.0;
      grid.conformal = [geom](double th, double z) {
        const double u = (geom.distance(th, z) - 0.7) / 0.5;
        const double u2 = u * u;
        const double bump = u2 >= 1.0 ? 0.0 : std::exp(-u2 / (1.0 - u2));
        return 1.0 - 0.5 * bump;
      };
      const double ref = grid.shortest_path(prob.def.p[0], prob.def.p[1],
                                            prob.def.q[0], prob.def.q[1]);
      const double len = path_length(r.geodesics.front().path, *prob.inst.manifold);
      std::ostringstream os;
      os << "shortest route " << len << " vs oracle " << ref;
      c.expect(len <= 1.01 * ref && len >= 0.9 * ref, os.str() + " outside bracket");
    }
  }
}

void criterion_conformal_hessian_identity() {
  Criterion c(8, "conformal Hessian identity under the harmonic potential");
  Problem prob = load_problem("half_plane_harmonic");
  const LagrangianProblem& lag = *prob.inst.lagrangian;
  Rng rng(8);
  std::vector<Vec> samples;
  const Box box = prob.def.lagrangian->sample_box;
  while (samples.size() < 50) {
    const Vec x = rng.in_box(box);
    if (prob.inst.barrier->inside(x) && lag.energy > lag.potential.value(x)) {
      samples.push_back(x);
    }
  }
  // 50 points x 4 directions = 200 seeded samples
  const double defect = hessian_transform_check(lag, *prob.inst.barrier, samples, 4, 8);
  c.expect_lt(defect, 1e-5, "max normalized defect");
}

void criterion_fixed_energy_trajectory() {
  Criterion c(9, "fixed-energy oscillator trajectory matches the shooting oracle");
  Problem prob = load_problem("half_plane_harmonic");
  const LagrangianProblem& lag = *prob.inst.lagrangian;
  auto conf = jacobi_metric(lag);
  const Barrier cb = prob.inst.barrier->rebind(conf);
  SolverConfig cfg = prob.def.solver;
  if (prob.def.lagrangian->k_nodes > 1) cfg.k_nodes = prob.def.lagrangian->k_nodes;
  const SolveReport rep = solve(prob.def.p, prob.def.q, cb, cfg, to_seed(prob.def.init));
  c.expect(rep.converged, "conformal-metric solve should converge");
  const Trajectory traj = trajectory_from_geodesic(lag, rep.path);
  c.expect(traj.ok, "reparametrization should succeed: " + traj.tag);
  c.expect_lt(traj.energy_spread, 1e-5 * lag.energy, "energy profile spread");

  const Vec v0{{0.0, std::sqrt(2.0 * (lag.energy - lag.potential.value(prob.def.p)))}};
  const auto oracle = oracles::oscillator_trajectory(prob.def.p, v0, 1.0, traj.t);
  double sup = 0.0;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    sup = std::max(sup, (oracle[i] - Vec(traj.points.row(i).transpose())).cwiseAbs().maxCoeff());
  }
  c.expect_lt(sup, 1e-3, "sup-norm distance to the shooting oracle");
}

void criterion_convexity_signs() {
  Criterion c(10, "convexity sign checks on disk, half plane and a wavy wall");
  for (const char* name : {"unit_disk", "half_plane"}) {
    Problem prob = load_problem(name);
    const HypothesisReport rep =
        check_hypotheses(*prob.inst.barrier, build_hypothesis_config(prob.def, prob.inst));
    for (const LevelStats& st : rep.per_level) {
      if (st.n_samples == 0) continue;
      c.expect(st.m_tangent <= 1e-9,
               std::string(name) + ": tangent Hessian constant must stay below 1e-9");
    }
    c.expect(rep.verdicts.at("t0").state == VerdictState::Pass,
             std::string(name) + ": boundary convexity should pass");
  }
  Problem wavy = load_problem("half_plane_wavy");
  const HypothesisReport rep =
      check_hypotheses(*wavy.inst.barrier, build_hypothesis_config(wavy.def, wavy.inst));
  c.expect(rep.per_level.back().m_tangent > 0.0,
           "wavy wall: positive tangent Hessian expected at small levels");
  c.expect(rep.verdicts.at("t0").state == VerdictState::Fail,
           "wavy wall: boundary convexity should fail");
}

}  // namespace

int main() {
  try {
    criterion_gradient_correctness();
    criterion_flow_first_integral();
    criterion_gradient_norm_formulas();
    criterion_punctured_plane_pattern();
    criterion_quadrant_solve();
    criterion_dijkstra_oracle();
    criterion_multiplicity();
    criterion_conformal_hessian_identity();
    criterion_fixed_energy_trajectory();
    criterion_convexity_signs();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance suite aborted: %s\n", e.what());
    return 1;
  }
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria failed\n", g_failures);
  }
  return g_failures;
}
