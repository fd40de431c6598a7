#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace geodom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Axis-aligned sampling box.
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x, double slack = 0.0) const {
    for (int i = 0; i < x.size(); ++i) {
      if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    }
    return true;
  }
  double max_extent() const { return (hi - lo).maxCoeff(); }
};

// Scalar field on a chart. Analytic derivatives are optional; when absent,
// consumers fall back to central finite differences.
struct ScalarField {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;  // chart partials
  std::function<Mat(const Vec&)> hessian;   // chart second partials

  bool has_gradient() const { return static_cast<bool>(gradient); }
  bool has_hessian() const { return static_cast<bool>(hessian); }
  double operator()(const Vec& x) const { return value(x); }
};

// Deterministic RNG. std::mt19937_64 output is fixed by the standard; the
// distributions below are hand-rolled so that streams are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // in [0,1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int n) {  // in [0,n)
    return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
  }
  Vec in_box(const Box& box) {
    Vec x(box.lo.size());
    for (int i = 0; i < x.size(); ++i) x[i] = uniform(box.lo[i], box.hi[i]);
    return x;
  }
  // Standard normal via Box-Muller (deterministic, no cached spare).
  double normal() {
    double u1 = uniform(), u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  Vec direction(int n) {
    Vec v(n);
    do {
      for (int i = 0; i < n; ++i) v[i] = normal();
    } while (v.norm() < 1e-12);
    return v;
  }

 private:
  std::mt19937_64 eng_;
};

namespace fd {
// Central finite-difference steps. First derivatives follow the documented
// default h = 1e-5 * max(1, |x|); second differences use a larger step to
// balance truncation against roundoff.
inline double step1(const Vec& x) { return 1e-5 * std::max(1.0, x.norm()); }
inline double step2(const Vec& x) { return 2e-4 * std::max(1.0, x.norm()); }
}  // namespace fd

}  // namespace geodom
