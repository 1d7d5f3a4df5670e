#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sqz {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

class FftPlans;

/// Uniform comoving-time grid, tau in units of t0, with its angular
/// frequency grid omega in units of 1/t0.
///
/// Time samples are centred: tau_j = (j - n/2) * dtau. Frequencies are kept
/// in FFT order, omega_i = 2*pi*q_i/window with q_i = i for i < n/2 and
/// q_i = i - n otherwise, so the Nyquist bin sits at -n/2.
///
/// Spectral convention (the only place it is defined):
///   phi~(omega_k) = dtau/sqrt(2 pi) * sum_j phi_j exp(-i omega_k tau_j)
/// with spectral measure domega = 2*pi/window, which makes
///   sum_j |phi_j|^2 dtau == sum_k |phi~_k|^2 domega.
class Grid {
 public:
  Grid(std::size_t n_points, double window);

  std::size_t size() const noexcept { return n_; }
  double window() const noexcept { return window_; }
  double dtau() const noexcept { return dtau_; }
  double domega() const noexcept { return domega_; }

  std::span<const double> tau() const noexcept { return tau_; }
  std::span<const double> omega() const noexcept { return omega_; }
  /// First-moment weights for momentum: omega with the unpaired Nyquist bin
  /// set to zero, so the weights sum to exactly zero.
  std::span<const double> momentum_weight() const noexcept { return momentum_weight_; }
  std::vector<double> omega_sorted() const;
  double omega_nyquist() const noexcept;

  /// Unitary transforms with the convention above.
  void to_spectrum(std::span<const Complex> time, std::span<Complex> spectrum) const;
  void from_spectrum(std::span<const Complex> spectrum, std::span<Complex> time) const;

  /// Unnormalised DFTs in FFT order (forward: exp(-2 pi i q j / n)). Used for
  /// diagonal spectral operators and circular convolutions, where the
  /// normalisation is folded into the multiplier.
  void dft_forward(std::span<const Complex> in, std::span<Complex> out) const;
  void dft_backward(std::span<const Complex> in, std::span<Complex> out) const;

  /// data <- IDFT(multiplier * DFT(data)) / n, in place.
  void apply_diagonal(std::span<Complex> data, std::span<const Complex> multiplier) const;

  bool operator==(const Grid& other) const noexcept {
    return n_ == other.n_ && window_ == other.window_;
  }

 private:
  std::size_t n_;
  double window_;
  double dtau_;
  double domega_;
  std::vector<double> tau_;
  std::vector<double> omega_;
  std::vector<double> momentum_weight_;
  std::shared_ptr<const FftPlans> plans_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws ConfigError unless n_points is a power of two >= 64 and window > 0.
GridPtr make_grid(std::size_t n_points, double window);

/// Photon-flux amplitude on a grid, normalised so the fundamental soliton is sech(tau).
struct PulseField {
  GridPtr grid;
  ComplexVector samples;

  double flux() const;  // sum |phi|^2 dtau
};

/// Spectrum in FFT order under the Grid convention.
struct SpectralField {
  GridPtr grid;
  ComplexVector samples;

  double flux() const;  // sum |phi~|^2 domega
};

PulseField zero_field(GridPtr grid);
PulseField sech_pulse(double amplitude, GridPtr grid);
SpectralField to_spectrum(const PulseField& field);
PulseField from_spectrum(const SpectralField& spectrum);

double flux(std::span<const Complex> samples, double dtau);

/// Dimensional scales of the comoving frame.
///   x0 = t0^2/|k''|, soliton period = (pi/2) x0, 1/nbar = chi t0/(|k''| v^2).
struct PhysicalScales {
  double t0 = 0.1e-12;        // s
  double k2_abs = 20e-27;     // s^2/m  (20 ps^2/km)
  double group_velocity = 2.0e8;  // m/s
  double chi = 0.0;           // nonlinear rate constant, consistent with nbar

  static PhysicalScales from_nbar(double t0, double k2_abs, double group_velocity, double nbar);

  double nbar() const;
  double x0() const;
  double soliton_period() const;
};

}  // namespace sqz
