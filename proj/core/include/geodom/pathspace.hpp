#pragma once

#include <vector>

#include "geodom/barrier.hpp"
#include "geodom/manifold.hpp"

namespace geodom {

// Fixed-endpoint polyline on the uniform parameter grid s_i = i/K. Nodes are
// stored in unwrapped chart coordinates; segment differences always take the
// shortest periodic representative. Immutable value type: optimizers build
// new paths.
struct DiscretePath {
  Mat nodes;                 // (K+1) x dim
  std::vector<int> winding;  // seed class, one entry per periodic axis

  int segments() const { return static_cast<int>(nodes.rows()) - 1; }
  int dim() const { return static_cast<int>(nodes.cols()); }
  Vec node(int i) const { return nodes.row(i).transpose(); }

  static DiscretePath line(const Vec& p, const Vec& q, int k_segments);
  DiscretePath reversed() const;
};

struct PathEval {
  double f = 0.0;        // discrete action
  double penalty = 0.0;  // quadrature of eps/phi^2
  Mat grad;              // (K-1) x dim, d f_eps / d interior node
  std::vector<double> e_profile;       // per segment: kinetic - eps/phi^2
  std::vector<double> lambda_profile;  // per node: 2 eps / phi^3

  double f_eps() const { return f + penalty; }
};

// f(x) = (K/2) sum_i <dx_i, dx_i>_{g(mid_i)}; midpoint metric quadrature.
double energy(const DiscretePath& path, const ChartManifold& m);

// Full evaluation of f_eps = f + (eps/K) sum over all nodes of 1/phi^2, with
// the exact gradient of the discrete functional at interior nodes (metric
// derivatives analytic when supplied, else central differences).
// eps = 0 switches the penalty off (pure action); otherwise eps in (0,1].
PathEval penalized_energy(const DiscretePath& path, const Barrier& b, double eps,
                          bool want_grad = true);

// Max over interior nodes of the g-norm of the discrete Euler-Lagrange
// defect: K^2 second difference + Gamma[v,v] + (2 eps/phi^3) grad phi.
double el_residual(const DiscretePath& path, const Barrier& b, double eps);

// g-weighted norm of the differential: sqrt(sum_i df_i g^{-1} df_i).
double grad_norm(const DiscretePath& path, const ChartManifold& m, const Mat& grad);

// Discrete length sum_i |dx_i|_{g(mid_i)}.
double path_length(const DiscretePath& path, const ChartManifold& m);

// Chart speed |dot x|_g per node (central differences; one-sided at ends).
std::vector<double> node_speeds(const DiscretePath& path, const ChartManifold& m);

}  // namespace geodom
