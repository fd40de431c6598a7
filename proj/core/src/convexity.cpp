#include "geodom/convexity.hpp"

#include <algorithm>
#include <cmath>

namespace geodom {

const char* to_string(VerdictState s) {
  switch (s) {
    case VerdictState::Pass: return "pass";
    case VerdictState::Fail: return "fail";
    default: return "indeterminate";
  }
}

LevelSamples level_sample(const Barrier& b, double a, int n, std::uint64_t seed, const Box& box) {
  if (!(a > 0.0)) throw InputError("level_sample: level must be positive");
  if (n < 1) throw InputError("level_sample: need n >= 1");
  Rng rng(seed);
  LevelSamples out;
  const int max_attempts = 64 * n;
  while (static_cast<int>(out.points.size()) < n && out.attempts < max_attempts) {
    ++out.attempts;
    const Vec x = rng.in_box(box);
    try {
      if (!b.in_chart(x) || !(b.value(x) > a)) continue;
      Vec y = project_to_level(b, x, a);
      if (std::abs(b.value(y) - a) < 1e-9 * std::max(1.0, a)) out.points.push_back(std::move(y));
    } catch (const Error&) {
      continue;
    }
  }
  out.sparse = static_cast<int>(out.points.size()) * 2 < n;
  return out;
}

double hessian_ratio(const Barrier& b, const Vec& x, const Vec& v) {
  const ChartManifold& m = b.manifold();
  const Mat hess = m.cov_hessian(b.phi(), x);
  const double vv = m.inner(x, v, v);
  return v.dot(hess * v) / (vv * b.value(x));
}

namespace {

// Columns form a g-orthonormal frame; in tangent mode the first frame vector
// is grad phi and only the remaining n-1 directions are returned.
std::vector<Vec> direction_frame(const ChartManifold& m, const Mat& g, const Vec& x,
                                 const Vec& grad_phi, DirectionMode mode) {
  const int n = m.dim();
  std::vector<Vec> frame;
  auto gdot = [&](const Vec& u, const Vec& v) { return u.dot(g * v); };

  std::vector<Vec> seeds;
  if (mode == DirectionMode::Tangent) seeds.push_back(grad_phi);
  for (int i = 0; i < n; ++i) seeds.push_back(Vec::Unit(n, i));

  for (const Vec& s : seeds) {
    Vec v = s;
    for (const Vec& f : frame) v -= gdot(f, v) * f;
    const double nn = gdot(v, v);
    if (nn > 1e-20) frame.push_back(v / std::sqrt(nn));
    if (static_cast<int>(frame.size()) == n) break;
  }
  if (mode == DirectionMode::Tangent && !frame.empty()) frame.erase(frame.begin());
  return frame;
}

}  // namespace

MEstimate estimate_M(const Barrier& b, double a, const std::vector<Vec>& samples,
                     DirectionMode mode, std::uint64_t seed, int n_random_dirs) {
  (void)a;
  const ChartManifold& m = b.manifold();
  const int n = m.dim();
  Rng rng(seed);
  MEstimate est;
  est.value = -std::numeric_limits<double>::infinity();

  for (const Vec& x : samples) {
    try {
      const Mat g = m.metric_at(x);
      const Vec grad_phi = m.riem_grad(b.phi(), x).comps;
      const double gp_norm2 = grad_phi.dot(g * grad_phi);
      if (!(gp_norm2 > kGradFloor * kGradFloor)) throw DegenerateGradientError("flat gradient");

      const Mat hess = m.cov_hessian(b.phi(), x);
      const double phi = b.value(x);
      auto ratio = [&](const Vec& v) {
        const double vv = v.dot(g * v);
        return v.dot(hess * v) / (vv * phi);
      };

      for (const Vec& v : direction_frame(m, g, x, grad_phi, mode)) {
        est.value = std::max(est.value, ratio(v));
      }
      for (int r = 0; r < n_random_dirs; ++r) {
        Vec v = rng.direction(n);
        if (mode == DirectionMode::Tangent) {
          v -= (v.dot(g * grad_phi) / gp_norm2) * grad_phi;
        }
        const double nn = v.dot(g * v);
        if (nn < 1e-18) continue;
        est.value = std::max(est.value, ratio(v / std::sqrt(nn)));
      }
    } catch (const Error&) {
      ++est.n_failures;
    }
  }
  if (!std::isfinite(est.value)) est.value = 0.0;
  return est;
}

namespace {

enum class Trend { Stable, Growing, Decaying };

Trend detect_trend(const std::vector<double>& v, double ratio, double total) {
  if (v.size() < 2) return Trend::Stable;
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  if (vmax < 1e-12) return Trend::Stable;

  const std::size_t window = std::min<std::size_t>(4, v.size() - 1);
  const std::size_t start = v.size() - 1 - window;
  bool all_grow = true, all_decay = true;
  for (std::size_t i = start; i + 1 < v.size(); ++i) {
    const double denom = std::max(std::abs(v[i]), 1e-300);
    const double r = v[i + 1] / denom;
    if (!(r >= ratio)) all_grow = false;
    if (!(r <= 1.0 / ratio) || v[i + 1] < 0.0) all_decay = false;
  }
  const double span = v.back() / std::max(std::abs(v[start]), 1e-300);
  if (all_grow && span >= total) return Trend::Growing;
  if (all_decay && span <= 1.0 / total && span >= 0.0) return Trend::Decaying;
  return Trend::Stable;
}

VerdictState combine(std::initializer_list<VerdictState> states) {
  VerdictState out = VerdictState::Pass;
  for (VerdictState s : states) {
    if (s == VerdictState::Fail) return VerdictState::Fail;
    if (s == VerdictState::Indeterminate) out = VerdictState::Indeterminate;
  }
  return out;
}

// Neighbourhood boxes: the whole sampling region (so global growth or decay
// across levels is never missed), plus local boxes centered on a spread of
// smallest-level samples (farthest-point selection, deterministic).
std::vector<Box> auto_boxes(const Barrier& b, const HypothesisConfig& cfg,
                            const std::vector<double>& levels) {
  if (!cfg.boxes.empty()) return cfg.boxes;
  std::vector<Box> boxes{cfg.sampling_box};

  const double hw =
      cfg.box_halfwidth > 0.0 ? cfg.box_halfwidth : 0.25 * cfg.sampling_box.max_extent();
  LevelSamples ls =
      level_sample(b, levels.back(), std::max(cfg.n_boxes * 8, 32), cfg.seed ^ 0x9e3779b9u,
                   cfg.sampling_box);
  std::vector<Vec> centers = ls.points;
  std::sort(centers.begin(), centers.end(), [](const Vec& a, const Vec& c) {
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] != c[i]) return a[i] < c[i];
    }
    return false;
  });
  std::vector<Vec> chosen;
  for (int j = 0; j < cfg.n_boxes && !centers.empty(); ++j) {
    std::size_t pick = 0;
    if (!chosen.empty()) {
      double best = -1.0;
      for (std::size_t i = 0; i < centers.size(); ++i) {
        double dmin = std::numeric_limits<double>::infinity();
        for (const Vec& c : chosen) dmin = std::min(dmin, (centers[i] - c).norm());
        if (dmin > best) {
          best = dmin;
          pick = i;
        }
      }
    }
    chosen.push_back(centers[pick]);
    centers.erase(centers.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  for (const Vec& c : chosen) {
    Box box;
    box.lo = c.array() - hw;
    box.hi = c.array() + hw;
    box.lo = box.lo.cwiseMax(cfg.sampling_box.lo);
    box.hi = box.hi.cwiseMin(cfg.sampling_box.hi);
    boxes.push_back(std::move(box));
  }
  return boxes;
}

struct Series {
  std::vector<double> grad_min, grad_max, m_tan, m_all;
};

}  // namespace

HypothesisReport check_hypotheses(const Barrier& b, const HypothesisConfig& cfg) {
  HypothesisReport rep;
  std::vector<double> levels = cfg.levels.empty() ? b.level_schedule() : cfg.levels;
  if (levels.empty()) throw InputError("check_hypotheses: empty level schedule");

  const std::vector<Box> boxes = auto_boxes(b, cfg, levels);

  // Per-box, per-level statistics.
  std::vector<Series> series(boxes.size());
  rep.per_level.resize(levels.size());
  for (std::size_t li = 0; li < levels.size(); ++li) {
    LevelStats& agg = rep.per_level[li];
    agg.a = levels[li];
    agg.grad_min = std::numeric_limits<double>::infinity();
    agg.grad_max = 0.0;
    agg.m_tangent = -std::numeric_limits<double>::infinity();
    agg.m_all = -std::numeric_limits<double>::infinity();
  }

  for (std::size_t bj = 0; bj < boxes.size(); ++bj) {
    BoxLevelSeries bls;
    bls.box = boxes[bj];
    for (std::size_t li = 0; li < levels.size(); ++li) {
      const double a = levels[li];
      const std::uint64_t seed = cfg.seed + 1315423911u * (bj + 1) + 2654435761u * (li + 1);
      LevelSamples ls = level_sample(b, a, cfg.samples_per_level, seed, boxes[bj]);

      LevelStats st;
      st.a = a;
      st.grad_min = std::numeric_limits<double>::infinity();
      st.grad_max = 0.0;
      std::vector<Vec> kept;
      for (const Vec& x : ls.points) {
        if (!boxes[bj].contains(x, 1e-9)) {
          ++st.n_failures;
          continue;
        }
        try {
          const double gn = b.grad_norm(x);
          st.grad_min = std::min(st.grad_min, gn);
          st.grad_max = std::max(st.grad_max, gn);
          kept.push_back(x);
        } catch (const Error&) {
          ++st.n_failures;
        }
      }
      st.n_samples = static_cast<int>(kept.size());
      MEstimate mt = estimate_M(b, a, kept, DirectionMode::Tangent, seed ^ 0x5bd1e995u,
                                cfg.n_random_dirs);
      MEstimate ma = estimate_M(b, a, kept, DirectionMode::All, seed ^ 0x27d4eb2fu,
                                cfg.n_random_dirs);
      st.m_tangent = mt.value;
      st.m_all = ma.value;
      st.n_failures += mt.n_failures;
      if (st.n_samples == 0) st.grad_min = 0.0;

      bls.per_level.push_back(st);
      if (st.n_samples > 0) {
        series[bj].grad_min.push_back(st.grad_min);
        series[bj].grad_max.push_back(st.grad_max);
        series[bj].m_tan.push_back(st.m_tangent);
        series[bj].m_all.push_back(st.m_all);
        LevelStats& agg = rep.per_level[li];
        agg.grad_min = std::min(agg.grad_min, st.grad_min);
        agg.grad_max = std::max(agg.grad_max, st.grad_max);
        agg.m_tangent = std::max(agg.m_tangent, st.m_tangent);
        agg.m_all = std::max(agg.m_all, st.m_all);
        agg.n_samples += st.n_samples;
      }
      rep.per_level[li].n_failures += st.n_failures;
    }
    rep.boxes.push_back(std::move(bls));
  }
  for (LevelStats& agg : rep.per_level) {
    if (!std::isfinite(agg.grad_min)) agg.grad_min = 0.0;
    if (!std::isfinite(agg.m_tangent)) agg.m_tangent = 0.0;
    if (!std::isfinite(agg.m_all)) agg.m_all = 0.0;
  }

  // Gradient bound verdicts, box-local as in the locality qualifier.
  Verdict grad_lower{VerdictState::Pass, std::numeric_limits<double>::infinity(),
                     "box-local estimate"};
  Verdict grad_upper{VerdictState::Pass, 0.0, "box-local estimate"};
  for (const Series& s : series) {
    if (s.grad_min.empty()) continue;
    const double lmin = *std::min_element(s.grad_min.begin(), s.grad_min.end());
    const double lmax = *std::max_element(s.grad_max.begin(), s.grad_max.end());
    grad_lower.margin = std::min(grad_lower.margin, lmin);
    grad_upper.margin = std::max(grad_upper.margin, lmax);
    if (lmin < cfg.grad_abs_floor ||
        detect_trend(s.grad_min, cfg.growth_ratio, cfg.growth_total) == Trend::Decaying) {
      grad_lower.state = VerdictState::Fail;
      grad_lower.reason = "min |grad phi| decays toward 0 across levels in a neighbourhood box";
    }
    if (lmax > cfg.grad_abs_cap ||
        detect_trend(s.grad_max, cfg.growth_ratio, cfg.growth_total) == Trend::Growing) {
      grad_upper.state = VerdictState::Fail;
      grad_upper.reason = "max |grad phi| grows without bound across levels in a neighbourhood box";
    }
  }
  rep.verdicts["grad_lower"] = grad_lower;
  rep.verdicts["grad_upper"] = grad_upper;

  // Hessian constants: bounded above across levels (tangent / all directions),
  // and the boundary-convexity sign condition.
  auto hessian_verdict = [&](bool tangent) {
    Verdict v{VerdictState::Pass, -std::numeric_limits<double>::infinity(), ""};
    for (const Series& s : series) {
      const std::vector<double>& m = tangent ? s.m_tan : s.m_all;
      if (m.empty()) continue;
      v.margin = std::max(v.margin, *std::max_element(m.begin(), m.end()));
      std::vector<double> pos(m.size());
      std::transform(m.begin(), m.end(), pos.begin(),
                     [](double x) { return std::max(x, 0.0); });
      if (detect_trend(pos, cfg.growth_ratio, cfg.growth_total) == Trend::Growing) {
        v.state = VerdictState::Fail;
        v.reason = "Hessian constant M grows without bound across levels";
      }
    }
    if (!std::isfinite(v.margin)) v.margin = 0.0;
    return v;
  };
  rep.verdicts["hessian_tangent"] = hessian_verdict(true);
  rep.verdicts["hessian_all"] = hessian_verdict(false);

  // Level regularity and sign: each sampled level must be a regular convex
  // hypersurface. No uniform cross-level gradient bound is needed here.
  Verdict t0{VerdictState::Pass, 0.0, "H_phi <= 0 on level tangents at all sampled levels"};
  for (const LevelStats& st : rep.per_level) {
    if (st.n_samples == 0) continue;
    t0.margin = std::max(t0.margin, st.m_tangent);
    if (st.m_tangent > cfg.m_tol) {
      t0.state = VerdictState::Fail;
      t0.reason = "positive tangent Hessian found on a level set";
    }
    if (!(st.grad_min > kGradFloor)) {
      t0.state = VerdictState::Fail;
      t0.reason = "degenerate gradient on a level set";
    }
  }
  rep.verdicts["boundary_convexity"] = t0;

  // Flow derivative bounds: from a band at the first level down to each level.
  Verdict flow_chart{VerdictState::Pass, 0.0, ""};
  Verdict flow_metric{VerdictState::Pass, 0.0, ""};
  if (cfg.run_flow_check && levels.size() >= 2) {
    const double band_lo = levels.front();
    const double band_hi = 2.0 * levels.front();
    std::vector<double> c1s, c1ms;
    Rng rng(cfg.seed ^ 0xc2b2ae35u);
    for (std::size_t li = 1; li < levels.size(); ++li) {
      FlowBounds fb;
      int found = 0, tried = 0;
      while (found < cfg.flow_samples && tried < 64 * cfg.flow_samples) {
        ++tried;
        const Vec x = rng.in_box(cfg.sampling_box);
        try {
          if (!b.in_chart(x)) continue;
          const double phi = b.value(x);
          if (!(phi >= band_lo && phi <= band_hi)) continue;
          const double s = phi - levels[li];
          if (!(s > 0.0)) continue;
          const int steps = default_flow_steps(s);
          const ChartManifold& m = b.manifold();
          const Vec y0 = flow(b, x, s, steps);
          const Mat g_from = m.metric_at(x);
          const Mat g_to = m.metric_at(y0);
          const int n = m.dim();
          const double h1 = fd::step1(x);
          Mat jac(n, n);
          for (int i = 0; i < n; ++i) {
            Vec xp = x, xm = x;
            xp[i] += h1;
            xm[i] -= h1;
            jac.col(i) = (flow(b, xp, s, steps) - flow(b, xm, s, steps)) / (2.0 * h1);
          }
          Eigen::JacobiSVD<Mat> svd(jac);
          fb.c1 = std::max(fb.c1, svd.singularValues().maxCoeff());
          Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(
              jac.transpose() * g_to * jac, g_from, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
          fb.c1_metric =
              std::max(fb.c1_metric, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
          const double h2 = fd::step2(x);
          for (int i = 0; i < n; ++i) {
            Vec xp = x, xm = x;
            xp[i] += h2;
            xm[i] -= h2;
            const Vec d2 =
                (flow(b, xp, s, steps) - 2.0 * y0 + flow(b, xm, s, steps)) / (h2 * h2);
            fb.c2 = std::max(fb.c2, d2.norm());
            fb.c2_metric = std::max(fb.c2_metric,
                                    std::sqrt(std::max(0.0, d2.dot(g_to * d2))) / g_from(i, i));
          }
          ++found;
          ++fb.n_ok;
        } catch (const Error&) {
          ++fb.n_failed;
        }
      }
      rep.flow.push_back({levels[li], fb});
      if (fb.n_ok > 0) {
        c1s.push_back(fb.c1);
        c1ms.push_back(fb.c1_metric);
        rep.flow_bounds.c1 = std::max(rep.flow_bounds.c1, fb.c1);
        rep.flow_bounds.c2 = std::max(rep.flow_bounds.c2, fb.c2);
        rep.flow_bounds.c1_metric = std::max(rep.flow_bounds.c1_metric, fb.c1_metric);
        rep.flow_bounds.c2_metric = std::max(rep.flow_bounds.c2_metric, fb.c2_metric);
        rep.flow_bounds.n_ok += fb.n_ok;
        rep.flow_bounds.n_failed += fb.n_failed;
      }
    }
    flow_chart.margin = rep.flow_bounds.c1;
    flow_metric.margin = rep.flow_bounds.c1_metric;
    if (c1s.empty()) {
      flow_chart.state = VerdictState::Indeterminate;
      flow_chart.reason = "no usable flow samples";
      flow_metric = flow_chart;
    } else {
      if (detect_trend(c1s, cfg.growth_ratio, cfg.growth_total) == Trend::Growing ||
          rep.flow_bounds.c1 > cfg.grad_abs_cap) {
        flow_chart.state = VerdictState::Fail;
        flow_chart.reason = "chart flow derivative grows across levels";
      }
      if (detect_trend(c1ms, cfg.growth_ratio, cfg.growth_total) == Trend::Growing ||
          rep.flow_bounds.c1_metric > cfg.grad_abs_cap) {
        flow_metric.state = VerdictState::Fail;
        flow_metric.reason = "metric-weighted flow derivative grows across levels";
      }
    }
  } else {
    flow_chart.state = VerdictState::Indeterminate;
    flow_chart.reason = "flow check skipped";
    flow_metric = flow_chart;
  }
  rep.verdicts["flow_chart"] = flow_chart;
  rep.verdicts["flow_metric"] = flow_metric;

  // Aggregates. The flow hypothesis does not fix which norm is intended: if
  // the chart norm passes while the metric-weighted norm fails, the aggregate
  // is indeterminate rather than failed.
  VerdictState flow_combo;
  if (flow_chart.state == VerdictState::Pass && flow_metric.state == VerdictState::Pass) {
    flow_combo = VerdictState::Pass;
  } else if (flow_chart.state == VerdictState::Fail && flow_metric.state == VerdictState::Fail) {
    flow_combo = VerdictState::Fail;
  } else {
    flow_combo = VerdictState::Indeterminate;
  }

  Verdict t0agg = t0;
  rep.verdicts["t0"] = t0agg;
  Verdict t1;
  t1.state = combine({grad_lower.state, grad_upper.state, flow_combo,
                      rep.verdicts["hessian_tangent"].state});
  t1.margin = rep.verdicts["hessian_tangent"].margin;
  if (t1.state == VerdictState::Indeterminate && flow_combo == VerdictState::Indeterminate) {
    t1.reason = flow_metric.state == VerdictState::Fail
                    ? "flow derivative bound holds in the chart norm but not in the metric norm"
                    : flow_chart.reason;
  }
  rep.verdicts["t1"] = t1;
  Verdict t2;
  t2.state = combine({grad_lower.state, grad_upper.state, rep.verdicts["hessian_all"].state});
  t2.margin = rep.verdicts["hessian_all"].margin;
  rep.verdicts["t2"] = t2;

  // Proper positive convex candidate function, when supplied.
  if (cfg.gordon_h) {
    const ScalarField& h = *cfg.gordon_h;
    const ChartManifold& m = b.manifold();
    Verdict gordon{VerdictState::Pass, 0.0,
                   "properness sampled along levels (pass-with-caveat)"};
    std::vector<double> min_h_per_level;
    for (std::size_t li = 0; li < levels.size() && gordon.state != VerdictState::Fail; ++li) {
      const std::uint64_t seed = cfg.seed + 777u * (li + 1);
      LevelSamples ls = level_sample(b, levels[li], cfg.samples_per_level, seed,
                                     cfg.sampling_box);
      double min_h = std::numeric_limits<double>::infinity();
      for (const Vec& x : ls.points) {
        const double hv = h.value(x);
        if (!(hv > 0.0)) {
          gordon.state = VerdictState::Fail;
          gordon.reason = "candidate function not positive";
          break;
        }
        min_h = std::min(min_h, hv);
        Eigen::SelfAdjointEigenSolver<Mat> es(m.cov_hessian(h, x), Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        gordon.margin = std::min(gordon.margin, lmin);
        if (lmin < -1e-8 * std::max(1.0, std::abs(hv))) {
          gordon.state = VerdictState::Fail;
          gordon.reason = "candidate function not convex (negative Hessian eigenvalue)";
          break;
        }
      }
      if (std::isfinite(min_h)) min_h_per_level.push_back(min_h);
    }
    if (gordon.state != VerdictState::Fail) {
      if (detect_trend(min_h_per_level, 1.2, 1.5) != Trend::Growing) {
        gordon.state = VerdictState::Indeterminate;
        gordon.reason = "properness not observed: h does not grow toward the boundary";
      }
    }
    rep.verdicts["gordon"] = gordon;
  }
  return rep;
}

double rescaling_check(const Barrier& b, const Warp& warp, double a,
                       const std::vector<Vec>& samples, std::uint64_t seed) {
  const ChartManifold& m = b.manifold();
  if (!warp.value || !warp.deriv) throw InputError("rescaling_check: warp needs value and deriv");

  // Warped field with chain-rule derivatives when phi has them; the warp's
  // second derivative comes from differencing warp.deriv.
  ScalarField warped;
  const ScalarField phi = b.phi();
  warped.value = [warp, phi](const Vec& x) { return warp.value(phi.value(x)); };
  if (phi.has_gradient()) {
    warped.gradient = [warp, phi](const Vec& x) {
      return warp.deriv(phi.value(x)) * phi.gradient(x);
    };
  }
  if (phi.has_gradient() && phi.has_hessian()) {
    warped.hessian = [warp, phi](const Vec& x) {
      const double t = phi.value(x);
      const double h = 1e-6 * std::max(1.0, std::abs(t));
      const double wdd = (warp.deriv(t + h) - warp.deriv(t - h)) / (2.0 * h);
      const Vec dphi = phi.gradient(x);
      return Mat(wdd * dphi * dphi.transpose() + warp.deriv(t) * phi.hessian(x));
    };
  }
  Barrier warped_barrier(b.manifold_ptr(), warped, b.level_schedule());

  Rng rng(seed);
  double defect = 0.0;
  for (const Vec& x : samples) {
    if (!(warp.deriv(b.value(x)) > 0.0)) {
      throw InputError("rescaling_check: warp derivative must be positive on the phi range");
    }
    const Mat g = m.metric_at(x);
    const Vec grad_phi = m.riem_grad(phi, x).comps;
    const double gp2 = grad_phi.dot(g * grad_phi);
    if (!(gp2 > kGradFloor * kGradFloor)) continue;
    const Mat h_phi = m.cov_hessian(phi, x);
    const Mat h_warp = m.cov_hessian(warped, x);
    const double wd = warp.deriv(b.value(x));

    std::vector<Vec> dirs = direction_frame(m, g, x, grad_phi, DirectionMode::Tangent);
    for (int r = 0; r < 4; ++r) {
      Vec v = rng.direction(m.dim());
      v -= (v.dot(g * grad_phi) / gp2) * grad_phi;
      const double nn = v.dot(g * v);
      if (nn > 1e-18) dirs.push_back(v / std::sqrt(nn));
    }
    for (const Vec& v : dirs) {
      const double lhs = v.dot(h_warp * v);
      const double rhs = wd * v.dot(h_phi * v);
      defect = std::max(defect, std::abs(lhs - rhs) / (1.0 + std::abs(v.dot(h_phi * v))));
    }
  }
  (void)a;
  return defect;
}

}  // namespace geodom
