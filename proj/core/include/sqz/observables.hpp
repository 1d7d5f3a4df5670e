#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sqz/ensemble_stats.hpp"
#include "sqz/field_grid.hpp"
#include "sqz/interferometer.hpp"
#include "sqz/state.hpp"

namespace sqz {

enum class Port { transmitted, reflected };

// Per-trajectory estimators (raw phase-space values, no ordering correction).

/// n_raw = nbar * sum_j q_j dtau, q = |phi|^2 or Re(phi_dag phi).
double photon_number(const FieldState& state, double nbar, const Grid& grid);
/// Spectral occupation density q_k in FFT order.
std::vector<double> spectral_occupation(const FieldState& state, const Grid& grid);
/// P_raw = nbar * sum_k w_k q_k domega (w = Grid::momentum_weight).
double momentum(const FieldState& state, double nbar, const Grid& grid);
PortSample port_sample(std::span<const double> occupation, const FieldState& state, double nbar, const Grid& grid);

/// Ordering corrections for photon number over `modes` grid modes.
///   Wigner:     <n> = <n_raw> - M/2,  Var(n) = Var(n_raw) - M/4
///   positive-P: <n> = <n_raw>,        Var(n) = Var(n_raw) + <n_raw>
double corrected_mean_photons(Representation rep, double raw_mean, std::size_t modes);
double corrected_photon_variance(Representation rep, double raw_variance, double raw_mean, std::size_t modes);

/// 10 log10(ratio). A result "X dB below shot noise" has variance_db == -X.
double to_db(double ratio);
double from_db(double db);
double below_shot_noise_db(double variance_db);

struct SqueezingResult {
  double zeta = 0.0;
  double mean_photons = 0.0;
  double variance = 0.0;
  double fano = 0.0;
  double variance_db = 0.0;
  double std_error_db = 0.0;
  Representation representation = Representation::classical;
  std::uint64_t n_traj = 0;
  std::uint64_t diverged = 0;
  bool valid = false;
  std::string diagnostic;
};

SqueezingResult squeezing_db(const EnsembleStats& stats, std::size_t checkpoint, Port port = Port::transmitted);
/// Last checkpoint, transmitted port.
SqueezingResult squeezing_db(const EnsembleStats& stats);

struct MomentumResult {
  double mean = 0.0;        // photons * (1/t0)
  double mean_se = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
  double baseline = 0.0;    // coherent-state variance of the noise-free output
  double ratio = 0.0;       // variance / baseline
  double ratio_se = 0.0;
  double ratio_db = 0.0;
  bool valid = false;
};

MomentumResult momentum_statistics(const EnsembleStats& stats, std::size_t checkpoint,
                                   Port port = Port::transmitted);

/// Coherent-state momentum variance nbar sum_k w_k^2 |phi~_k|^2 domega.
double coherent_momentum_variance(const PulseField& field, double nbar);

/// Ensemble-mean spectral occupation q_k (FFT order) with the Wigner
/// half-photon-per-mode term 1/(2 nbar domega) removed.
std::vector<double> mean_spectrum(const EnsembleStats& stats, std::size_t checkpoint);
ComplexVector mean_field(const EnsembleStats& stats, std::size_t checkpoint);

/// Abscissae where the finite-difference slope of y(x) changes sign,
/// interpolated linearly between slope midpoints.
std::vector<double> find_turning_points(std::span<const double> x, std::span<const double> y);

struct IoPoint {
  double amplitude = 0.0;
  double flux_scaled = 0.0;  // transmitted photon number / nbar
};

struct IoCurve {
  double ratio = 0.0;
  double zeta = 0.0;
  std::vector<IoPoint> points;
  std::vector<double> turning_points;
};

/// Classical transmitted flux for sech inputs of each amplitude.
IoCurve io_curve(std::span<const double> amplitudes, const TopologySpec& spec, GridPtr grid);

}  // namespace sqz
