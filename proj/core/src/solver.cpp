#include "geodom/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geodom {

void SolverConfig::validate() const {
  if (!(eps0 > 0.0 && eps0 <= 1.0)) throw InputError("solver: eps0 must be in (0, 1]");
  if (!(eps_ratio > 0.0 && eps_ratio < 1.0)) throw InputError("solver: eps_ratio must be in (0,1)");
  if (!(eps_min > 0.0 && grad_tol > 0.0)) throw InputError("solver: tolerances must be positive");
  if (k_nodes < 2) throw InputError("solver: k_nodes must be >= 2");
  if (max_inner_iters < 1 || max_outer_stages < 1) {
    throw InputError("solver: iteration caps must be >= 1");
  }
}

namespace {

struct IterateCache {
  std::vector<double> phi;
  std::vector<double> grad_phi_norm;  // g-norm of grad phi per node
  std::vector<Mat> metric;            // g at interior nodes
};

IterateCache cache_for(const DiscretePath& path, const Barrier& b, double eps) {
  const ChartManifold& m = b.manifold();
  const int K = path.segments();
  IterateCache c;
  c.phi.resize(K + 1);
  c.grad_phi_norm.assign(K + 1, 0.0);
  c.metric.resize(K + 1);
  for (int i = 0; i <= K; ++i) {
    const Vec x = path.node(i);
    c.metric[i] = m.metric_at(x);
    if (eps > 0.0) {
      c.phi[i] = b.value(x);
      const Vec df = m.field_gradient(b.phi(), x);
      const Vec gr = c.metric[i].llt().solve(df);
      c.grad_phi_norm[i] = std::sqrt(std::max(0.0, df.dot(gr)));
    } else {
      c.phi[i] = std::numeric_limits<double>::infinity();
    }
  }
  return c;
}

bool nodes_admissible(const DiscretePath& trial, const Barrier& b, double eps) {
  for (int i = 1; i < trial.segments(); ++i) {
    const Vec x = trial.node(i);
    if (!x.allFinite() || !b.in_chart(x)) return false;
    if (eps > 0.0 && !(b.value(x) > 0.0)) return false;
  }
  return true;
}

// A node may not move farther than (a fraction of) its first-order boundary
// clearance phi/|grad phi|; this blocks jumps across thin boundary sheets
// that leave phi positive on both ends.
bool step_within_clearance(const DiscretePath& path, const DiscretePath& trial,
                           const IterateCache& cache, double eps) {
  if (eps <= 0.0) return true;
  for (int i = 1; i < path.segments(); ++i) {
    const Vec d = trial.node(i) - path.node(i);
    const double move = std::sqrt(std::max(0.0, d.dot(cache.metric[i] * d)));
    const double allowed = 0.9 * cache.phi[i] / std::max(cache.grad_phi_norm[i], 1e-6);
    if (move > allowed) return false;
  }
  return true;
}

// Solves tridiag(-1, 2, -1) x = b in place (Thomas algorithm). This is the
// path Laplacian of the discrete action; using its inverse as preconditioner
// makes the energy term Newton-exact on flat metrics.
void laplacian_solve(Eigen::Ref<Eigen::VectorXd> b) {
  const int m = static_cast<int>(b.size());
  static thread_local std::vector<double> c;
  c.resize(m);
  c[0] = -0.5;
  b[0] *= 0.5;
  for (int i = 1; i < m; ++i) {
    const double denom = 2.0 + c[i - 1];
    c[i] = -1.0 / denom;
    b[i] = (b[i] + b[i - 1]) / denom;
  }
  for (int i = m - 2; i >= 0; --i) b[i] -= c[i] * b[i + 1];
}

}  // namespace

DiscretePath minimize_stage(const DiscretePath& path0, const Barrier& b, double eps,
                            const SolverConfig& cfg, InnerStats* stats) {
  const ChartManifold& m = b.manifold();
  const int K = path0.segments();
  const int n = path0.dim();

  DiscretePath path = path0;
  PathEval ev = penalized_energy(path, b, eps);

  InnerStats st;

  Mat prev_grad;
  Mat prev_step;
  double alpha = 0.0;
  double prev_dirderiv = 0.0;
  double gnorm = std::numeric_limits<double>::infinity();
  int no_progress = 0;
  constexpr double kArmijo = 1e-4;

  while (st.iters < cfg.max_inner_iters) {
    IterateCache cache = cache_for(path, b, eps);

    // Descent direction: g^{-1} df per node, then the inverse path Laplacian
    // along the parameter axis. The metric-weighted differential norm (the
    // reported path-space gradient norm) falls out of the first stage.
    Mat dir(K - 1, n);
    double gnorm2 = 0.0;
    for (int i = 1; i < K; ++i) {
      const Vec df = ev.grad.row(i - 1).transpose();
      const Vec d = cache.metric[i].llt().solve(df);
      dir.row(i - 1) = d.transpose();
      gnorm2 += df.dot(d);
    }
    gnorm = std::sqrt(std::max(0.0, gnorm2));
    st.grad_norm = gnorm;
    if (gnorm < cfg.grad_tol) {
      st.hit_tol = true;
      break;
    }
    for (int d = 0; d < n; ++d) laplacian_solve(dir.col(d));
    dir /= static_cast<double>(K);
    double dir_deriv = (ev.grad.array() * dir.array()).sum();
    if (!(dir_deriv > 0.0)) {
      // Fall back to plain preconditioned steepest descent.
      for (int i = 1; i < K; ++i) {
        dir.row(i - 1) =
            cache.metric[i].llt().solve(ev.grad.row(i - 1).transpose()).transpose();
      }
      dir_deriv = gnorm2;
      if (!(dir_deriv > 0.0)) break;  // numerically flat
    }

    if (st.iters == 0 || !(alpha > 0.0) || prev_step.size() == 0) {
      alpha = 1.0;
    } else {
      // BB1 in the preconditioner geometry: <s,s>_{P^-1} / <s,y>_{P^-1}
      // reduces to alpha_prev^2 * dirderiv_prev / (s . (G_k - G_{k-1})).
      const double sy = (prev_step.array() * (ev.grad - prev_grad).array()).sum();
      alpha = (sy > 1e-300) ? alpha * alpha * prev_dirderiv / sy : alpha * 2.0;
    }
    alpha = std::clamp(alpha, 1e-12, 1e2);

    const double f0 = ev.f_eps();
    bool accepted = false;
    double a = alpha;
    for (int bt = 0; bt < 60; ++bt, a *= 0.5) {
      DiscretePath trial = path;
      trial.nodes.block(1, 0, K - 1, n) = path.nodes.block(1, 0, K - 1, n) - a * dir;
      if (!nodes_admissible(trial, b, eps)) continue;
      if (!step_within_clearance(path, trial, cache, eps)) continue;
      PathEval trial_ev;
      try {
        trial_ev = penalized_energy(trial, b, eps);
      } catch (const Error&) {
        continue;
      }
      if (trial_ev.f_eps() <= f0 - kArmijo * a * dir_deriv) {
        prev_step = trial.nodes.block(1, 0, K - 1, n) - path.nodes.block(1, 0, K - 1, n);
        prev_grad = ev.grad;
        prev_dirderiv = dir_deriv;
        path = std::move(trial);
        ev = std::move(trial_ev);
        alpha = a;
        accepted = true;
        break;
      }
    }
    ++st.iters;
    if (!accepted) break;  // line search stalled
    // Decreases at the floating-point floor of f_eps cannot drive the
    // gradient lower; stop instead of walking in noise.
    if (f0 - ev.f_eps() < 1e-15 * std::max(1.0, std::abs(f0))) {
      if (++no_progress >= 30) break;
    } else {
      no_progress = 0;
    }
  }
  if (!st.hit_tol && st.iters > 0) {
    gnorm = grad_norm(path, m, ev.grad);
    st.grad_norm = gnorm;
    st.hit_tol = gnorm < cfg.grad_tol;
  }
  if (stats) *stats = st;
  return path;
}

namespace {

Vec wound_endpoint(const Vec& q, const ChartManifold& m, const std::vector<int>& winding) {
  Vec qe = q;
  const auto& axes = m.periodic_axes();
  for (std::size_t j = 0; j < axes.size() && j < winding.size(); ++j) {
    qe[axes[j].axis] += winding[j] * axes[j].period;
  }
  return qe;
}

// Deterministic nudge for seed nodes that land exactly on the boundary.
bool nudge_inside(const Barrier& b, Vec& x) {
  if (b.inside(x)) return true;
  const double scale = 1e-3 * std::max(1.0, x.norm());
  for (int k = 0; k < x.size(); ++k) {
    for (double sgn : {1.0, -1.0}) {
      Vec y = x;
      y[k] += sgn * scale;
      if (b.inside(y)) {
        x = y;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

DiscretePath seed_path(const Vec& p, const Vec& q, const Barrier& b, const SolverConfig& cfg,
                       const SeedDescriptor& seed) {
  const ChartManifold& m = b.manifold();
  const Vec qe = wound_endpoint(q, m, seed.winding);

  DiscretePath path = DiscretePath::line(p, qe, cfg.k_nodes);
  if (seed.via) {
    // Smooth plateau detour: ramp onto the waypoint offset, ride it through
    // the middle of the path, ramp off. A kinked polyline or a narrow hump
    // carries so much bending energy that descent can jump out of the
    // intended basin before the detour region attracts it.
    const Vec bump = *seed.via - 0.5 * (p + qe);
    auto ramp = [](double x) {
      x = std::clamp(x, 0.0, 1.0);
      return x * x * (3.0 - 2.0 * x);
    };
    constexpr double kRampWidth = 0.35;
    for (int i = 1; i < cfg.k_nodes; ++i) {
      const double t = static_cast<double>(i) / cfg.k_nodes;
      path.nodes.row(i) += ramp(t / kRampWidth) * ramp((1.0 - t) / kRampWidth) * bump.transpose();
    }
  }
  path.winding = seed.winding;

  const double a_seed =
      cfg.seed_level > 0.0 ? cfg.seed_level : b.level_schedule().front();
  for (int i = 1; i < path.segments(); ++i) {
    Vec x = path.node(i);
    if (!nudge_inside(b, x)) {
      throw InputError("seed path node " + std::to_string(i) + " is outside the domain");
    }
    const double phi = b.value(x);
    if (phi < a_seed) {
      try {
        x = flow(b, x, -(a_seed - phi));
      } catch (const Error&) {
        // keep the strictly-inside node; the penalty handles the rest
      }
    }
    path.nodes.row(i) = x.transpose();
  }
  return path;
}

namespace {

StageRecord stage_record(int stage, double eps, const DiscretePath& path, const Barrier& b,
                         const InnerStats& st) {
  StageRecord r;
  r.stage = stage;
  r.eps = eps;
  PathEval ev = penalized_energy(path, b, eps, /*want_grad=*/false);
  r.f_eps = ev.f_eps();
  r.f = ev.f;
  double min_phi = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= path.segments(); ++i) min_phi = std::min(min_phi, b.value(path.node(i)));
  r.min_phi = min_phi;
  r.el_residual = el_residual(path, b, eps);
  const auto [emin, emax] = std::minmax_element(ev.e_profile.begin(), ev.e_profile.end());
  r.e_spread = *emax - *emin;
  r.max_lambda = *std::max_element(ev.lambda_profile.begin(), ev.lambda_profile.end());
  r.inner_iters = st.iters;
  r.hit_tol = st.hit_tol;
  r.grad_norm = st.grad_norm;
  return r;
}

bool collapse_detected(const std::vector<StageRecord>& stages, const SolverConfig& cfg) {
  const int w = cfg.collapse_window;
  if (static_cast<int>(stages.size()) < w + 1) return false;
  for (std::size_t i = stages.size() - w; i < stages.size(); ++i) {
    if (!(stages[i].min_phi <= cfg.collapse_ratio * stages[i - 1].min_phi)) return false;
  }
  return true;
}

}  // namespace

SolveReport solve(const Vec& p, const Vec& q, const Barrier& b, const SolverConfig& cfg,
                  const SeedDescriptor& seed) {
  cfg.validate();
  if (!b.inside(p)) throw InputError("endpoint p lies outside the domain (phi <= 0)");
  if (!b.inside(q)) throw InputError("endpoint q lies outside the domain (phi <= 0)");

  SolveReport rep;
  rep.seed_label = seed.label;

  if (p.size() == q.size() && (p.array() == q.array()).all()) {
    rep.path.nodes = p.transpose().replicate(cfg.k_nodes + 1, 1);
    rep.path.winding = seed.winding;
    rep.f_value = 0.0;
    rep.beta = b.value(p);
    rep.converged = true;
    StageRecord r;
    r.stage = 0;
    r.eps = cfg.eps0;
    r.min_phi = rep.beta;
    r.hit_tol = true;
    rep.stages.push_back(r);
    return rep;
  }

  DiscretePath path = seed_path(p, q, b, cfg, seed);
  double eps = cfg.eps0;
  int stage = 0;
  while (true) {
    InnerStats st;
    path = minimize_stage(path, b, eps, cfg, &st);
    rep.stages.push_back(stage_record(stage, eps, path, b, st));

    if (collapse_detected(rep.stages, cfg)) {
      rep.failure_reason = "boundary-collapse";
      break;
    }
    if (eps <= cfg.eps_min) break;
    if (stage + 1 >= cfg.max_outer_stages) {
      rep.failure_reason = "stage-cap";
      break;
    }
    eps *= cfg.eps_ratio;
    ++stage;
  }

  rep.path = path;
  rep.beta = std::numeric_limits<double>::infinity();
  for (const StageRecord& r : rep.stages) rep.beta = std::min(rep.beta, r.min_phi);
  rep.f_value = energy(path, b.manifold());
  rep.geodesic_residual = el_residual(path, b, 0.0);

  if (rep.failure_reason.empty()) {
    const StageRecord& last = rep.stages.back();
    const double resid_tol = 10.0 * cfg.grad_tol * cfg.k_nodes;
    const bool beta_ok =
        rep.stages.size() < 2 ||
        last.min_phi >= cfg.beta_floor * rep.stages[rep.stages.size() - 2].min_phi;
    if (!last.hit_tol) {
      rep.failure_reason = "inner-loop did not reach grad_tol";
    } else if (!(rep.geodesic_residual < resid_tol)) {
      rep.failure_reason = "geodesic residual above tolerance";
    } else if (!beta_ok) {
      rep.failure_reason = "min-phi dropped at final stage";
    } else if (!(rep.beta > 0.0)) {
      rep.failure_reason = "boundary bound not positive";
    }
  }
  rep.converged = rep.failure_reason.empty();
  return rep;
}

MultiplicityResult solve_multiplicity(const Vec& p, const Vec& q, const Barrier& b,
                                      const SolverConfig& cfg,
                                      const std::vector<SeedDescriptor>& classes) {
  MultiplicityResult out;
  for (const SeedDescriptor& cls : classes) {
    SolveReport rep = solve(p, q, b, cfg, cls);
    if (rep.converged) {
      out.geodesics.push_back(std::move(rep));
    } else {
      out.dropped.push_back(std::move(rep));
    }
  }
  std::sort(out.geodesics.begin(), out.geodesics.end(),
            [](const SolveReport& a, const SolveReport& c) { return a.f_value < c.f_value; });
  return out;
}

double path_separation(const DiscretePath& a, const DiscretePath& c) {
  double sep = 0.0;
  const int K = std::min(a.segments(), c.segments());
  for (int i = 0; i <= K; ++i) sep = std::max(sep, (a.node(i) - c.node(i)).norm());
  return sep;
}

}  // namespace geodom
