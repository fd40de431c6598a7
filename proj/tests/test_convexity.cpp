#include <doctest.h>

#include "geodom/convexity.hpp"
#include "geodom/gallery.hpp"
#include "geodom/problem.hpp"
#include "geodom/serialize.hpp"

using namespace geodom;

namespace {

Barrier make(const std::string& field, double a0 = 0.5, ParamMap params = {}) {
  auto m = make_metric("euclidean", {{"dim", 2}});
  return Barrier(m, make_barrier_field(field, params), Barrier::geometric_schedule(a0, 6));
}

}  // namespace

TEST_CASE("level sampling") {
  SUBCASE("half plane levels are horizontal lines") {
    const Barrier b = make("half_plane_y");
    const Box box{Vec{{-2.0, 0.01}}, Vec{{2.0, 3.0}}};
    const LevelSamples ls = level_sample(b, 1.0, 24, 5, box);
    REQUIRE(static_cast<int>(ls.points.size()) == 24);
    for (const Vec& x : ls.points) CHECK(std::abs(x[1] - 1.0) < 1e-9);
  }
  SUBCASE("quadrant levels are hyperbolas") {
    const Barrier b = make("sqrt_xy");
    const Box box{Vec{{0.05, 0.05}}, Vec{{3.0, 3.0}}};
    const LevelSamples ls = level_sample(b, 1.0, 16, 5, box);
    REQUIRE(!ls.points.empty());
    for (const Vec& x : ls.points) CHECK(std::abs(x[0] * x[1] - 1.0) < 3e-9);
  }
  SUBCASE("punctured plane levels are circles") {
    const Barrier b(make_metric("polar_inverse_r2", {}), make_barrier_field("radial_r", {}));
    const Box box{Vec{{0.05, -3.0}}, Vec{{2.0, 3.0}}};
    const LevelSamples ls = level_sample(b, 0.3, 16, 5, box);
    REQUIRE(!ls.points.empty());
    for (const Vec& x : ls.points) CHECK(std::abs(x[0] - 0.3) < 1e-9);
  }
  SUBCASE("sparse regions are flagged, not fatal") {
    const Barrier b = make("unit_disk");
    const Box box{Vec{{2.0, 2.0}}, Vec{{3.0, 3.0}}};  // entirely outside the disk
    const LevelSamples ls = level_sample(b, 0.5, 16, 5, box);
    CHECK(ls.points.empty());
    CHECK(ls.sparse);
  }
}

TEST_CASE("Hessian constant estimation") {
  SUBCASE("unit disk: constant Hessian gives -2/a") {
    const Barrier b = make("unit_disk");
    for (double a : {0.5, 0.25}) {
      const Box box{Vec{{-0.99, -0.99}}, Vec{{0.99, 0.99}}};
      const LevelSamples ls = level_sample(b, a, 16, 7, box);
      REQUIRE(!ls.points.empty());
      const MEstimate est = estimate_M(b, a, ls.points, DirectionMode::Tangent, 7);
      CHECK(est.value == doctest::Approx(-2.0 / a).epsilon(1e-9));
    }
  }
  SUBCASE("half plane: exactly zero") {
    const Barrier b = make("half_plane_y");
    const Box box{Vec{{-2.0, 0.01}}, Vec{{2.0, 3.0}}};
    const LevelSamples ls = level_sample(b, 0.5, 16, 7, box);
    const MEstimate est = estimate_M(b, 0.5, ls.points, DirectionMode::Tangent, 7);
    CHECK(std::abs(est.value) < 1e-9);
  }
  SUBCASE("quadrant level xy = 1: symbolic tangent Hessian is -1") {
    // For v = (x, -1/x) on the level, H[v,v] = -1 and <v,v> = x^2 + x^-2, so
    // the ratio is -1/(x^2 + x^-2); the sampled max approaches 0 from below.
    const Barrier b = make("sqrt_xy");
    const std::vector<Vec> samples = {Vec{{1.0, 1.0}}, Vec{{2.0, 0.5}}, Vec{{4.0, 0.25}}};
    for (const Vec& x : samples) {
      Vec v{{x[0], -1.0 / x[0]}};
      const double expected = -1.0 / (x[0] * x[0] + 1.0 / (x[0] * x[0]));
      CHECK(hessian_ratio(b, x, v) == doctest::Approx(expected).epsilon(1e-12));
    }
    const MEstimate est = estimate_M(b, 1.0, samples, DirectionMode::Tangent, 7);
    CHECK(est.value == doctest::Approx(-1.0 / (16.0 + 1.0 / 16.0)).epsilon(1e-9));
    CHECK(est.value < 0.0);
  }
  SUBCASE("ratio is 0-homogeneous in the direction") {
    const Barrier b = make("sqrt_xy");
    const Vec x{{1.3, 0.9}};
    const Vec v{{0.4, -0.7}};
    CHECK(std::abs(hessian_ratio(b, x, v) - hessian_ratio(b, x, Vec(3.0 * v))) < 1e-12);
  }
  SUBCASE("tangent mode never exceeds all-directions mode") {
    const Barrier b = make("unit_disk");
    const Box box{Vec{{-0.99, -0.99}}, Vec{{0.99, 0.99}}};
    const LevelSamples ls = level_sample(b, 0.25, 16, 7, box);
    const MEstimate mt = estimate_M(b, 0.25, ls.points, DirectionMode::Tangent, 7);
    const MEstimate ma = estimate_M(b, 0.25, ls.points, DirectionMode::All, 7);
    CHECK(mt.value <= ma.value + 1e-12);
  }
}

TEST_CASE("check_hypotheses verdict patterns") {
  SUBCASE("unit disk is convex with well-behaved gradient") {
    Problem prob = load_problem("unit_disk");
    const HypothesisConfig cfg = build_hypothesis_config(prob.def, prob.inst);
    const HypothesisReport rep = check_hypotheses(*prob.inst.barrier, cfg);
    CHECK(rep.verdicts.at("t0").state == VerdictState::Pass);
    CHECK(rep.verdicts.at("boundary_convexity").margin <= 1e-9);
    CHECK(rep.verdicts.at("gordon").state == VerdictState::Pass);
    for (const LevelStats& st : rep.per_level) {
      CHECK(st.m_tangent <= 1e-9);
      CHECK(st.m_tangent == doctest::Approx(-2.0 / st.a).epsilon(1e-6));
    }
  }
  SUBCASE("wavy half plane fails boundary convexity at small levels") {
    Problem prob = load_problem("half_plane_wavy");
    const HypothesisConfig cfg = build_hypothesis_config(prob.def, prob.inst);
    const HypothesisReport rep = check_hypotheses(*prob.inst.barrier, cfg);
    CHECK(rep.verdicts.at("t0").state == VerdictState::Fail);
    CHECK(rep.per_level.back().m_tangent > 0.0);
  }
  SUBCASE("reports are bit-identical for identical seed and config") {
    Problem prob = load_problem("quadrant_sqrtxy");
    const HypothesisConfig cfg = build_hypothesis_config(prob.def, prob.inst);
    const HypothesisReport a = check_hypotheses(*prob.inst.barrier, cfg);
    const HypothesisReport c = check_hypotheses(*prob.inst.barrier, cfg);
    CHECK(hypothesis_report_json(a, prob.def, "") == hypothesis_report_json(c, prob.def, ""));
  }
  SUBCASE("gordon rejects a non-proper candidate") {
    Problem prob = load_problem("unit_disk");
    HypothesisConfig cfg = build_hypothesis_config(prob.def, prob.inst);
    cfg.gordon_h = prob.inst.barrier->phi();  // concave and bounded
    const HypothesisReport rep = check_hypotheses(*prob.inst.barrier, cfg);
    CHECK(rep.verdicts.at("gordon").state != VerdictState::Pass);
  }
}

TEST_CASE("rescaling identity") {
  SUBCASE("identity warp is exact") {
    const Barrier b = make("sqrt_xy");
    const Warp warp{[](double t) { return t; }, [](double) { return 1.0; }};
    const Box box{Vec{{0.05, 0.05}}, Vec{{3.0, 3.0}}};
    const LevelSamples ls = level_sample(b, 0.8, 12, 3, box);
    CHECK(rescaling_check(b, warp, 0.8, ls.points, 3) < 1e-12);
  }
  SUBCASE("square warp on the half plane vanishes on level tangents") {
    const Barrier b = make("half_plane_y");
    const Warp warp{[](double t) { return t * t; }, [](double t) { return 2.0 * t; }};
    const Box box{Vec{{-2.0, 0.01}}, Vec{{2.0, 3.0}}};
    const LevelSamples ls = level_sample(b, 1.0, 12, 3, box);
    CHECK(rescaling_check(b, warp, 1.0, ls.points, 3) < 1e-6);
  }
  SUBCASE("sqrt warp links the two quadrant barriers") {
    const Barrier b = make("xy");
    const Warp warp{[](double t) { return std::sqrt(t); },
                    [](double t) { return 0.5 / std::sqrt(t); }};
    const Box box{Vec{{0.2, 0.2}}, Vec{{3.0, 3.0}}};
    const LevelSamples ls = level_sample(b, 1.0, 12, 3, box);
    REQUIRE(!ls.points.empty());
    CHECK(rescaling_check(b, warp, 1.0, ls.points, 3) < 1e-5);
  }
  SUBCASE("non-monotone warp is rejected") {
    const Barrier b = make("half_plane_y");
    const Warp warp{[](double t) { return -t; }, [](double) { return -1.0; }};
    CHECK_THROWS_AS(rescaling_check(b, warp, 1.0, {Vec{{0.0, 1.0}}}, 3), InputError);
  }
}
