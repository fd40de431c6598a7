#pragma once

#include <stdexcept>
#include <string>

#include "geodom/types.hpp"

namespace geodom {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point fed to a chart outside its validity region.
struct ChartDomainError : Error {
  using Error::Error;
};

// Metric not usable (near-singular / not positive definite).
struct IllConditionedMetricError : Error {
  using Error::Error;
};

// Geodesic integration left the chart; carries the last valid state.
struct EscapeError : Error {
  EscapeError(const std::string& msg, double t_, Vec x_, Vec v_)
      : Error(msg), t(t_), x(std::move(x_)), v(std::move(v_)) {}
  double t;
  Vec x, v;
};

// Normalized flow field undefined: |grad phi| below the floor.
struct DegenerateGradientError : Error {
  using Error::Error;
};

// Flow time would reach or cross the boundary.
struct BoundaryReachError : Error {
  using Error::Error;
};

// Level projection asked to move to a level above phi(x).
struct WrongSideError : Error {
  using Error::Error;
};

// A path node left the domain {phi > 0}.
struct BoundaryViolationError : Error {
  BoundaryViolationError(const std::string& msg, int node_) : Error(msg), node(node_) {}
  int node;
};

// Conformal factor E - V non-positive at a requested point.
struct EnergyLevelError : Error {
  using Error::Error;
};

// Sampling region unusable (too many failed samples).
struct UnusableRegionError : Error {
  using Error::Error;
};

// Malformed problem definition / CLI input.
struct InputError : Error {
  using Error::Error;
};

}  // namespace geodom
