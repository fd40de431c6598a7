#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "geodom/jacobi.hpp"
#include "geodom/manifold.hpp"

namespace geodom {

using ParamMap = std::map<std::string, double>;

struct PotentialSpec {
  std::string name = "zero";
  ParamMap params;
};

// Builtin metric-tensor fields. "conformal" multiplies the Euclidean metric
// by (energy - V) and needs the potential spec.
std::shared_ptr<ChartManifold> make_metric(const std::string& name, const ParamMap& params,
                                           const std::optional<PotentialSpec>& potential = {});

// Builtin barrier fields, all with analytic first and second derivatives.
ScalarField make_barrier_field(const std::string& name, const ParamMap& params);

ScalarField make_potential(const std::string& name, const ParamMap& params);

// 1/phi with chain-rule derivatives; proper positive convex candidate for
// convex domains.
ScalarField reciprocal_field(const ScalarField& phi);

// Signed helix geometry on the flat cylinder chart (theta, z): the helix
// z = pitch * theta lifts to the line family z = pitch*(theta + 2 pi k);
// w is the shortest representative of z - pitch*theta mod 2 pi pitch.
struct HelixGeometry {
  double pitch = 1.0;
  double wrap_w(double theta, double z) const;
  double distance(double theta, double z) const;  // chart distance to the lift
  double ridge_distance() const;                  // half-gap between windings
};

const std::map<std::string, std::string>& gallery_defs();  // name -> definition JSON

}  // namespace geodom
