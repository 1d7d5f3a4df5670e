#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "sqz/field_grid.hpp"
#include "sqz/raman.hpp"
#include "sqz/state.hpp"

namespace sqz {

/// anomalous: linear operator -(i/2)(1 - d^2/dtau^2), for which sech(tau) is stationary.
/// normal:    linear operator -(i/2)(1 + d^2/dtau^2).
enum class Dispersion { anomalous, normal };

std::string_view to_string(Dispersion d);
Dispersion dispersion_from_string(std::string_view name);

struct PhysicsParams {
  Dispersion dispersion = Dispersion::anomalous;
  double electronic_fraction = 1.0;  // f
  double nbar = 1e8;
  std::optional<RamanModel> raman;
  double temperature = 0.0;  // K, phonon bath
  double loss_db_per_km = 0.0;
  PhysicalScales scales;
  double dzeta = 0.01;
  bool nonlinear = true;  // false: linear (dispersion) propagation only

  static PhysicsParams ideal(double nbar = 1e8, double dzeta = 0.01);
  /// Raman-modified fibre with the silica default model; f = 1 - fraction.
  static PhysicsParams with_raman(double nbar, double t0, double temperature, double loss_db_per_km,
                                  double dzeta = 0.01);

  /// Throws ConfigError on inconsistent settings (ideal limit requires f = 1, etc.).
  void validate() const;
  /// Power loss rate per unit zeta.
  double scaled_loss_rate() const;
};

/// Pre-drawn stochastic increments for one nonlinear step. Empty vectors mean "no draw".
struct StepNoise {
  std::vector<double> phonon;          // Gamma_v(tau_j), rate units (variance ~ 1/dzeta)
  std::vector<double> electronic;      // dW for phi, variance f dzeta/(nbar dtau)
  std::vector<double> electronic_dagger;
};

/// Split-step integrator for one arm. Owns scratch buffers, so one instance
/// must not be shared between threads; copies are cheap (tables are shared).
class Propagator {
 public:
  Propagator(GridPtr grid, PhysicsParams params);

  const PhysicsParams& params() const noexcept { return params_; }
  const Grid& grid() const noexcept { return *grid_; }
  const RamanResponse* raman() const noexcept;
  const PhononNoise* phonon_noise() const noexcept;

  /// Multiplies each mode by exp(-(i/2)(1 -+ omega^2) h) and the amplitude by
  /// exp(-alpha h/2); pass h = dzeta/2 for a half step. In the Wigner
  /// representation loss re-injects vacuum noise (rng required then).
  void linear_step(FieldState& state, double h, Representation rep, Rng* rng = nullptr);

  /// Pointwise Kerr/Raman map over length h. With noise == nullptr, draws are
  /// made internally from rng according to the representation; rng may be
  /// null for the classical representation.
  void nonlinear_step(FieldState& state, double h, Representation rep, Rng* rng = nullptr,
                      const StepNoise* noise = nullptr);

  /// Symmetric split-step over [0, zeta_total] landing exactly on zeta_total.
  /// Throws TrajectoryDiverged for runaway positive-P samples.
  void propagate(FieldState& state, double zeta_total, Representation rep, Rng* rng = nullptr);

 private:
  struct Tables;

  const ComplexVector& linear_multiplier(double h);
  void check_divergence(const FieldState& state, double zeta) const;

  GridPtr grid_;
  PhysicsParams params_;
  std::shared_ptr<const Tables> tables_;
  // scratch
  ComplexVector spectrum_;
  ComplexVector intensity_;
  ComplexVector intensity_spectrum_;
  double cached_h_ = -1.0;
  ComplexVector cached_multiplier_;
  double divergence_threshold_ = 0.0;
};

/// Convenience wrappers over Propagator for single calls.
PulseField linear_half_step(const PulseField& field, double dzeta, const PhysicsParams& params);
PulseField nonlinear_step(const PulseField& field, double dzeta, const PhysicsParams& params,
                          const StepNoise* noise = nullptr);
PulseField propagate(const PulseField& field, double zeta_total, const PhysicsParams& params,
                     Representation rep = Representation::classical, Rng* rng = nullptr);

}  // namespace sqz
