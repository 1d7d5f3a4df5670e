#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sqz/field_grid.hpp"
#include "sqz/nlse_engine.hpp"
#include "sqz/state.hpp"

namespace sqz {

enum class ArmKind { nonlinear, free, vacuum };

std::string_view to_string(ArmKind kind);
ArmKind arm_kind_from_string(std::string_view name);

struct ArmSpec {
  ArmKind kind = ArmKind::nonlinear;
  PhysicsParams physics;
};

/// Two-arm interferometer. A Sagnac loop is modelled as a Mach-Zehnder whose
/// arms are independent waveguides of equal length, recombined at the same
/// splitter; loop mode forces recombine_ratio = split_ratio and arm_b = arm_a.
struct TopologySpec {
  double split_ratio = 0.9;  // intensity transmission rho
  std::optional<double> recombine_ratio;
  bool loop = true;
  PhysicsParams arm_a;
  ArmSpec arm_b;
  double phase_shift = 0.0;  // applied to arm_b before recombination
  double zeta = 3.0;

  static TopologySpec sagnac(double ratio, double zeta, PhysicsParams physics);
  /// Mach-Zehnder with a linear-only second arm sharing arm_a's dispersion.
  static TopologySpec free_arm(double ratio, double zeta, PhysicsParams physics);

  double effective_recombine_ratio() const;
  /// arm_b as actually propagated (loop mode copies arm_a).
  ArmSpec effective_arm_b() const;
  void validate() const;
};

/// c = sqrt(rho) a + i sqrt(1-rho) b,  d = i sqrt(1-rho) a + sqrt(rho) b.
/// Doubled states transform phi_dagger with the conjugate matrix.
std::pair<PulseField, PulseField> beamsplit(const PulseField& a, const PulseField& b, double ratio);
std::pair<FieldState, FieldState> beamsplit(const FieldState& a, const FieldState& b, double ratio);

struct OutputPorts {
  FieldState transmitted;  // reduces to single-arm propagation of the input as rho -> 1
  FieldState reflected;
};

/// Holds one propagator per arm; not shareable between threads (copy it).
class Interferometer {
 public:
  Interferometer(GridPtr grid, TopologySpec spec);

  const TopologySpec& spec() const noexcept { return spec_; }
  const Grid& grid() const noexcept { return *grid_; }

  /// Splits `input` against a vacuum port (vacuum noise per representation),
  /// propagates both arms and recombines.
  OutputPorts run(const FieldState& input, Representation rep, Rng* rng);

  /// As run(), reporting the recombined ports at each increasing distance in `zetas`.
  void run_checkpoints(const FieldState& input, std::span<const double> zetas, Representation rep, Rng* rng,
                       const std::function<void(std::size_t, const OutputPorts&)>& sink);

 private:
  OutputPorts recombine(const FieldState& arm_a, const FieldState& arm_b) const;

  GridPtr grid_;
  TopologySpec spec_;
  ArmSpec arm_b_;
  Propagator propagator_a_;
  std::optional<Propagator> propagator_b_;
};

OutputPorts run_topology(const FieldState& input, GridPtr grid, const TopologySpec& spec, Representation rep,
                         Rng* rng);

/// Per-frequency interference term phi1*(w) phi2(w) - phi2*(w) phi1(w) = 2i Im[phi1~* phi2~],
/// reported as the real quantity 2 Im[phi1~*(w) phi2~(w)] in FFT order.
std::vector<double> interference_flux(const PulseField& first, const PulseField& second);

}  // namespace sqz
