#include <doctest.h>

#include "geodom/gallery.hpp"
#include "geodom/jacobi.hpp"
#include "geodom/problem.hpp"
#include "geodom/solver.hpp"
#include "oracles.hpp"

using namespace geodom;

namespace {

LagrangianProblem harmonic_problem(double energy) {
  LagrangianProblem prob;
  prob.manifold = make_metric("euclidean", {{"dim", 2}});
  prob.potential = make_potential("harmonic", {});
  prob.energy = energy;
  return prob;
}

Barrier half_plane(std::shared_ptr<const ChartManifold> m) {
  return Barrier(std::move(m), make_barrier_field("half_plane_y", {}),
                 Barrier::geometric_schedule(0.4, 5));
}

}  // namespace

TEST_CASE("jacobi metric") {
  SUBCASE("zero potential leaves the metric untouched") {
    LagrangianProblem prob;
    prob.manifold = make_metric("euclidean", {{"dim", 2}});
    prob.potential = make_potential("zero", {});
    prob.energy = 1.0;
    auto conf = jacobi_metric(prob);
    const Vec x{{0.3, -2.0}};
    CHECK((conf->metric_at(x) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("harmonic potential scales pointwise") {
    const LagrangianProblem prob = harmonic_problem(1.0);
    auto conf = jacobi_metric(prob);
    CHECK((conf->metric_at(Vec{{0.0, 0.0}}) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((conf->metric_at(Vec{{1.0, 0.0}}) - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-15);
  }
  SUBCASE("energy level errors outside {V < E}") {
    const LagrangianProblem prob = harmonic_problem(1.0);
    auto conf = jacobi_metric(prob);
    CHECK_THROWS_AS(conf->metric_at(Vec{{std::sqrt(2.0), 0.0}}), Error);
    CHECK_FALSE(conf->in_chart(Vec{{2.0, 0.0}}));
  }
  SUBCASE("conformal length equals the weighted base length") {
    // Jacobi length of a curve == integral of sqrt(E - V) |xdot|_g ds.
    const LagrangianProblem prob = harmonic_problem(3.0);
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const double a0 = rng.uniform(-0.5, 0.5), a1 = rng.uniform(-0.5, 0.5);
      const double b0 = rng.uniform(0.2, 0.8), b1 = rng.uniform(-0.4, 0.4);
      auto curve = [&](double s) { return Vec{{a0 + a1 * std::sin(s), b0 + b1 * s * s}}; };
      auto curve_dot = [&](double s) { return Vec{{a1 * std::cos(s), 2.0 * b1 * s}}; };
      const double lhs = jacobi_length(prob, curve, curve_dot, 0.0, 1.0);
      const double rhs = oracles::simpson(
          [&](double s) {
            const Vec x = curve(s);
            return std::sqrt((prob.energy - prob.potential.value(x))) * curve_dot(s).norm();
          },
          0.0, 1.0);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
  }
}

TEST_CASE("conformal Hessian relation") {
  SUBCASE("zero potential is exact") {
    LagrangianProblem prob;
    prob.manifold = make_metric("euclidean", {{"dim", 2}});
    prob.potential = make_potential("zero", {});
    prob.energy = 2.0;
    const Barrier b = half_plane(prob.manifold);
    const std::vector<Vec> samples = {Vec{{0.1, 0.5}}, Vec{{-0.4, 1.2}}};
    CHECK(hessian_transform_check(prob, b, samples, 6, 3) < 1e-12);
  }
  SUBCASE("harmonic potential, frozen one-point value") {
    // At (1/2, 3/4) with E = 2 and v = (1, 1/3) the conformal Hessian of
    // phi = y is -16/153 (hand-derived before freezing).
    const LagrangianProblem prob = harmonic_problem(2.0);
    const Barrier b = half_plane(prob.manifold);
    auto conf = jacobi_metric(prob);
    const Vec x{{0.5, 0.75}};
    const Vec v{{1.0, 1.0 / 3.0}};
    const Mat h = conf->cov_hessian(b.phi(), x);
    CHECK(v.dot(h * v) == doctest::Approx(-16.0 / 153.0).epsilon(1e-12));
  }
  SUBCASE("harmonic potential satisfies the relation everywhere sampled") {
    const LagrangianProblem prob = harmonic_problem(2.0);
    const Barrier b = half_plane(prob.manifold);
    Rng rng(4);
    std::vector<Vec> samples;
    const Box box{Vec{{-1.0, 0.05}}, Vec{{1.0, 1.6}}};
    while (samples.size() < 40) {
      const Vec x = rng.in_box(box);
      if (prob.energy > prob.potential.value(x)) samples.push_back(x);
    }
    CHECK(hessian_transform_check(prob, b, samples, 5, 11) < 1e-5);
  }
  SUBCASE("directions orthogonal to both gradients reduce to the trace term") {
    // In 2-D with phi = y: grad phi = e_y, grad u parallel to -x; at points on
    // the y-axis grad u is also e_y, so v = e_x is orthogonal to both and
    // H^E[v,v] - H[v,v] = <grad phi, grad u> <v,v> exactly.
    const LagrangianProblem prob = harmonic_problem(2.0);
    const Barrier b = half_plane(prob.manifold);
    auto conf = jacobi_metric(prob);
    const Vec x{{0.0, 0.8}};
    const Vec v{{1.0, 0.0}};
    const double lhs = v.dot(conf->cov_hessian(b.phi(), x) * v) -
                       v.dot(prob.manifold->cov_hessian(b.phi(), x) * v);
    // u = log(E - V)/2, d u/d y = -y/(2 (E - V))
    const double expected = -x[1] / (2.0 * (prob.energy - prob.potential.value(x)));
    CHECK(lhs == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("compatibility condition for the potential") {
  auto m = make_metric("euclidean", {{"dim", 2}});
  const Barrier b = half_plane(m);
  const Box box{Vec{{-2.0, 0.01}}, Vec{{2.0, 2.0}}};
  const std::vector<double> levels = {0.4, 0.2, 0.1, 0.05};

  SUBCASE("constant potential passes with M' = 0") {
    LagrangianProblem prob{m, make_potential("zero", {}), 1.0};
    const RepCheckResult r = rep_check(prob, b, levels, 16, 3, box);
    CHECK(r.pass);
    CHECK(r.m_prime == 0.0);
  }
  SUBCASE("V = -y fails: M' = 1/a doubles under level halving") {
    LagrangianProblem prob{m, make_potential("linear_y", {{"slope", -1.0}}), 1.0};
    const RepCheckResult r = rep_check(prob, b, levels, 16, 3, box);
    CHECK_FALSE(r.pass);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      CHECK(r.per_level[i] == doctest::Approx(1.0 / levels[i]).epsilon(1e-9));
    }
  }
  SUBCASE("V = y^2 passes: the pairing is nonnegative") {
    LagrangianProblem prob{m, make_potential("quadratic_y", {{"c", 1.0}}), 1.0};
    const RepCheckResult r = rep_check(prob, b, levels, 16, 3, box);
    CHECK(r.pass);
    CHECK(r.m_prime == 0.0);
  }
}

TEST_CASE("trajectory reparametrization") {
  SUBCASE("free particle reproduces solver geodesics node-for-node") {
    LagrangianProblem prob;
    prob.manifold = make_metric("euclidean", {{"dim", 2}});
    prob.potential = make_potential("zero", {});
    prob.energy = 0.5;
    const Barrier base = Barrier(prob.manifold, make_barrier_field("sqrt_xy", {}));
    SolverConfig cfg;
    cfg.k_nodes = 60;
    cfg.grad_tol = 1e-10;
    cfg.eps_min = 1e-12;
    cfg.max_outer_stages = 60;
    const Vec p{{1.0, 2.0}}, q{{2.0, 1.0}};
    const SolveReport direct = solve(p, q, base, cfg);

    auto conf = jacobi_metric(prob);
    const Barrier cb = base.rebind(conf);
    const SolveReport via_jacobi = solve(p, q, cb, cfg);
    REQUIRE(direct.converged);
    REQUIRE(via_jacobi.converged);
    const Trajectory traj = trajectory_from_geodesic(prob, via_jacobi.path);
    REQUIRE(traj.ok);
    CHECK((traj.points - direct.path.nodes).cwiseAbs().maxCoeff() < 1e-9);
    for (double e : traj.energy_profile) {
      CHECK(e == doctest::Approx(prob.energy).epsilon(1e-6));
    }
  }
  SUBCASE("stationary trajectory requires E = V(p)") {
    const LagrangianProblem prob = harmonic_problem(0.0);  // V(0) = 0 = E
    DiscretePath constant;
    constant.nodes = Vec{{0.0, 0.0}}.transpose().replicate(11, 1);
    const Trajectory traj = trajectory_from_geodesic(prob, constant);
    CHECK(traj.ok);
    CHECK(traj.energy_profile.front() == 0.0);
    const LagrangianProblem wrong = harmonic_problem(1.0);
    CHECK_THROWS_AS(trajectory_from_geodesic(wrong, constant), EnergyLevelError);
  }
}
