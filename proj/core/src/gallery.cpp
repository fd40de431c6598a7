#include "geodom/gallery.hpp"

#include <cmath>

namespace geodom {

namespace {

double param(const ParamMap& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

// C2 ramp: identity up to 1/2, quintic blend flat at 1 (value 1, zero first
// and second derivative).
double cap_value(double t) {
  if (t <= 0.5) return t;
  if (t >= 1.0) return 1.0;
  const double u = 2.0 * t - 1.0;
  const double p = ((3.0 * u - 7.0) * u + 4.0) * u * u * u + u;
  return 0.5 + 0.5 * p;
}
double cap_deriv(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = 2.0 * t - 1.0;
  return ((15.0 * u - 28.0) * u + 12.0) * u * u + 1.0;
}
double cap_second(double t) {
  if (t <= 0.5 || t >= 1.0) return 0.0;
  const double u = 2.0 * t - 1.0;
  return 2.0 * ((60.0 * u - 84.0) * u + 24.0) * u;
}

// Compactly supported C-infinity bump, B(0) = 1, B(|u| >= 1) = 0.
double bump_value(double u) {
  const double u2 = u * u;
  if (u2 >= 1.0) return 0.0;
  return std::exp(-u2 / (1.0 - u2));
}
double bump_deriv(double u) {
  const double u2 = u * u;
  if (u2 >= 1.0) return 0.0;
  const double d = 1.0 - u2;
  return bump_value(u) * (-2.0 * u / (d * d));
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

double HelixGeometry::wrap_w(double theta, double z) const {
  return std::remainder(z - pitch * theta, kTwoPi * pitch);
}
double HelixGeometry::distance(double theta, double z) const {
  return std::abs(wrap_w(theta, z)) / std::sqrt(1.0 + pitch * pitch);
}
double HelixGeometry::ridge_distance() const {
  return M_PI * pitch / std::sqrt(1.0 + pitch * pitch);
}

std::shared_ptr<ChartManifold> make_metric(const std::string& name, const ParamMap& params,
                                           const std::optional<PotentialSpec>& potential) {
  if (name == "euclidean") {
    const int dim = static_cast<int>(param(params, "dim", 2));
    auto m = std::make_shared<ChartManifold>(
        dim, [dim](const Vec&) { return Mat(Mat::Identity(dim, dim)); }, "euclidean");
    m->set_metric_derivative(
        [dim](const Vec&) { return std::vector<Mat>(dim, Mat::Zero(dim, dim)); });
    return m;
  }
  if (name == "polar_inverse_r2") {
    // Chart (r, theta), metric dr^2 + r^-2 dtheta^2, r > 0.
    auto m = std::make_shared<ChartManifold>(
        2,
        [](const Vec& x) {
          Mat g = Mat::Identity(2, 2);
          g(1, 1) = 1.0 / (x[0] * x[0]);
          return g;
        },
        "polar_inverse_r2");
    m->set_chart_domain([](const Vec& x) { return x[0] > 0.0; });
    m->set_metric_derivative([](const Vec& x) {
      std::vector<Mat> dg(2, Mat::Zero(2, 2));
      dg[0](1, 1) = -2.0 / (x[0] * x[0] * x[0]);
      return dg;
    });
    m->add_periodic_axis(1, kTwoPi);
    return m;
  }
  if (name == "flat_cylinder") {
    // Chart (theta, z), flat metric, theta periodic.
    auto m = std::make_shared<ChartManifold>(
        2, [](const Vec&) { return Mat(Mat::Identity(2, 2)); }, "flat_cylinder");
    m->set_metric_derivative([](const Vec&) { return std::vector<Mat>(2, Mat::Zero(2, 2)); });
    m->add_periodic_axis(0, kTwoPi);
    return m;
  }
  if (name == "helix_valley") {
    // Flat cylinder with a conformal valley ring at distance d0 from the
    // helix on both sides: g = rho(d)^2 I, rho = 1 - depth * bump((d-d0)/sigma).
    HelixGeometry geom{param(params, "pitch", 1.0)};
    const double depth = param(params, "depth", 0.55);
    const double d0 = param(params, "d0", 0.5);
    const double sigma = param(params, "sigma", 0.25);
    if (!(depth < 1.0)) throw InputError("helix_valley: depth must be < 1");
    if (!(d0 + sigma < geom.ridge_distance())) {
      throw InputError("helix_valley: valley overlaps the mid-strip ridge");
    }
    auto rho = [geom, depth, d0, sigma](const Vec& x) {
      return 1.0 - depth * bump_value((geom.distance(x[0], x[1]) - d0) / sigma);
    };
    auto m = std::make_shared<ChartManifold>(
        2, [rho](const Vec& x) { return Mat(rho(x) * rho(x) * Mat::Identity(2, 2)); },
        "helix_valley");
    m->set_metric_derivative([geom, depth, d0, sigma, rho](const Vec& x) {
      const double w = geom.wrap_w(x[0], x[1]);
      const double sgn = w >= 0.0 ? 1.0 : -1.0;
      const double root = std::sqrt(1.0 + geom.pitch * geom.pitch);
      const Vec dd = sgn / root * Vec{{-geom.pitch, 1.0}};
      const double u = (geom.distance(x[0], x[1]) - d0) / sigma;
      const double drho = -depth * bump_deriv(u) / sigma;
      const double r = rho(x);
      std::vector<Mat> dg(2);
      for (int k = 0; k < 2; ++k) dg[k] = 2.0 * r * drho * dd[k] * Mat::Identity(2, 2);
      return dg;
    });
    m->add_periodic_axis(0, kTwoPi);
    return m;
  }
  if (name == "conformal") {
    if (!potential) throw InputError("conformal metric needs a potential");
    const int dim = static_cast<int>(param(params, "dim", 2));
    LagrangianProblem prob;
    prob.manifold = make_metric("euclidean", {{"dim", static_cast<double>(dim)}});
    prob.potential = make_potential(potential->name, potential->params);
    prob.energy = param(params, "energy", 1.0);
    return jacobi_metric(prob);
  }
  throw InputError("unknown metric '" + name + "'");
}

ScalarField make_barrier_field(const std::string& name, const ParamMap& params) {
  ScalarField f;
  if (name == "sqrt_xy") {
    f.value = [](const Vec& x) {
      if (x[0] <= 0.0 || x[1] <= 0.0) return -std::sqrt(std::abs(x[0] * x[1]));
      return std::sqrt(x[0] * x[1]);
    };
    f.gradient = [](const Vec& x) {
      const double s = std::sqrt(x[0] * x[1]);
      return Vec{{0.5 * x[1] / s, 0.5 * x[0] / s}};
    };
    f.hessian = [](const Vec& x) {
      const double s = std::sqrt(x[0] * x[1]);
      Mat h(2, 2);
      h(0, 0) = -0.25 * x[1] / (s * x[0]);
      h(1, 1) = -0.25 * x[0] / (s * x[1]);
      h(0, 1) = h(1, 0) = 0.25 / s;
      return h;
    };
    return f;
  }
  if (name == "xy") {
    f.value = [](const Vec& x) { return x[0] * x[1]; };
    f.gradient = [](const Vec& x) { return Vec{{x[1], x[0]}}; };
    f.hessian = [](const Vec&) {
      Mat h = Mat::Zero(2, 2);
      h(0, 1) = h(1, 0) = 1.0;
      return h;
    };
    return f;
  }
  if (name == "radial_r") {
    f.value = [](const Vec& x) { return x[0]; };
    f.gradient = [](const Vec& x) { return Vec(Vec::Unit(x.size(), 0)); };
    f.hessian = [](const Vec& x) { return Mat(Mat::Zero(x.size(), x.size())); };
    return f;
  }
  if (name == "radial_euclidean") {
    f.value = [](const Vec& x) { return x.norm(); };
    f.gradient = [](const Vec& x) { return Vec(x / x.norm()); };
    f.hessian = [](const Vec& x) {
      const double r = x.norm();
      return Mat((Mat::Identity(x.size(), x.size()) - (x / r) * (x / r).transpose()) / r);
    };
    return f;
  }
  if (name == "half_plane_y") {
    f.value = [](const Vec& x) { return x[1]; };
    f.gradient = [](const Vec& x) { return Vec(Vec::Unit(x.size(), 1)); };
    f.hessian = [](const Vec& x) { return Mat(Mat::Zero(x.size(), x.size())); };
    return f;
  }
  if (name == "unit_disk") {
    f.value = [](const Vec& x) { return 1.0 - x.squaredNorm(); };
    f.gradient = [](const Vec& x) { return Vec(-2.0 * x); };
    f.hessian = [](const Vec& x) {
      return Mat(-2.0 * Mat::Identity(x.size(), x.size()));
    };
    return f;
  }
  if (name == "wavy_half_plane") {
    const double amp = param(params, "amp", 0.5);
    const double freq = param(params, "freq", 1.0);
    f.value = [amp, freq](const Vec& x) { return x[1] + amp * std::sin(freq * x[0]); };
    f.gradient = [amp, freq](const Vec& x) {
      return Vec{{amp * freq * std::cos(freq * x[0]), 1.0}};
    };
    f.hessian = [amp, freq](const Vec& x) {
      Mat h = Mat::Zero(2, 2);
      h(0, 0) = -amp * freq * freq * std::sin(freq * x[0]);
      return h;
    };
    return f;
  }
  if (name == "constant") {
    const double c = param(params, "value", 1.0);
    f.value = [c](const Vec&) { return c; };
    f.gradient = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
    f.hessian = [](const Vec& x) { return Mat(Mat::Zero(x.size(), x.size())); };
    return f;
  }
  if (name == "dist_to_helix") {
    HelixGeometry geom{param(params, "pitch", 1.0)};
    const double width = param(params, "width", 0.3);
    if (!(width < geom.ridge_distance())) {
      throw InputError("dist_to_helix: width must stay below the mid-strip ridge");
    }
    f.value = [geom, width](const Vec& x) {
      return width * cap_value(geom.distance(x[0], x[1]) / width);
    };
    f.gradient = [geom, width](const Vec& x) {
      const double w = geom.wrap_w(x[0], x[1]);
      const double sgn = w >= 0.0 ? 1.0 : -1.0;
      const double root = std::sqrt(1.0 + geom.pitch * geom.pitch);
      const double sp = cap_deriv(geom.distance(x[0], x[1]) / width);
      return Vec{{-sp * sgn * geom.pitch / root, sp * sgn / root}};
    };
    f.hessian = [geom, width](const Vec& x) {
      const double w = geom.wrap_w(x[0], x[1]);
      const double sgn = w >= 0.0 ? 1.0 : -1.0;
      const double root = std::sqrt(1.0 + geom.pitch * geom.pitch);
      const Vec dd = sgn / root * Vec{{-geom.pitch, 1.0}};
      const double spp = cap_second(geom.distance(x[0], x[1]) / width) / width;
      return Mat(spp * dd * dd.transpose());
    };
    return f;
  }
  throw InputError("unknown barrier field '" + name + "'");
}

ScalarField make_potential(const std::string& name, const ParamMap& params) {
  ScalarField f;
  if (name == "zero") {
    f.value = [](const Vec&) { return 0.0; };
    f.gradient = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
    f.hessian = [](const Vec& x) { return Mat(Mat::Zero(x.size(), x.size())); };
    return f;
  }
  if (name == "harmonic") {
    const double k = param(params, "k", 1.0);
    f.value = [k](const Vec& x) { return 0.5 * k * x.squaredNorm(); };
    f.gradient = [k](const Vec& x) { return Vec(k * x); };
    f.hessian = [k](const Vec& x) { return Mat(k * Mat::Identity(x.size(), x.size())); };
    return f;
  }
  if (name == "linear_y") {
    const double slope = param(params, "slope", -1.0);
    f.value = [slope](const Vec& x) { return slope * x[1]; };
    f.gradient = [slope](const Vec& x) {
      Vec g = Vec::Zero(x.size());
      g[1] = slope;
      return g;
    };
    f.hessian = [](const Vec& x) { return Mat(Mat::Zero(x.size(), x.size())); };
    return f;
  }
  if (name == "quadratic_y") {
    const double c = param(params, "c", 1.0);
    f.value = [c](const Vec& x) { return c * x[1] * x[1]; };
    f.gradient = [c](const Vec& x) {
      Vec g = Vec::Zero(x.size());
      g[1] = 2.0 * c * x[1];
      return g;
    };
    f.hessian = [c](const Vec& x) {
      Mat h = Mat::Zero(x.size(), x.size());
      h(1, 1) = 2.0 * c;
      return h;
    };
    return f;
  }
  throw InputError("unknown potential '" + name + "'");
}

ScalarField reciprocal_field(const ScalarField& phi) {
  ScalarField f;
  f.value = [phi](const Vec& x) { return 1.0 / phi.value(x); };
  if (phi.has_gradient()) {
    f.gradient = [phi](const Vec& x) {
      const double v = phi.value(x);
      return Vec(-phi.gradient(x) / (v * v));
    };
  }
  if (phi.has_gradient() && phi.has_hessian()) {
    f.hessian = [phi](const Vec& x) {
      const double v = phi.value(x);
      const Vec g = phi.gradient(x);
      return Mat(2.0 / (v * v * v) * g * g.transpose() - phi.hessian(x) / (v * v));
    };
  }
  return f;
}

}  // namespace geodom
