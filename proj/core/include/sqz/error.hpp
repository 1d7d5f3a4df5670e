#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

/// Raised for any invalid user-supplied setting (grid, physics, topology, config file).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the propagator when a positive-P trajectory leaves the
/// numerically trusted region. The ensemble runner counts and excludes it.
class TrajectoryDiverged : public std::runtime_error {
 public:
  explicit TrajectoryDiverged(double zeta)
      : std::runtime_error("trajectory diverged at zeta=" + std::to_string(zeta)), zeta_(zeta) {}
  double zeta() const noexcept { return zeta_; }

 private:
  double zeta_;
};

}  // namespace sqz
