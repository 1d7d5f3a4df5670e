#pragma once

#include <algorithm>
#include <vector>

#include "sqz/field_grid.hpp"
#include "sqz/state.hpp"

namespace sqz {

/// One damped-oscillator term strength * exp(-damping tau) * sin(center_frequency tau),
/// frequencies in units of 1/t0.
struct RamanOscillator {
  double strength = 1.0;
  double center_frequency = 0.0;
  double damping = 0.0;
};

/// Delayed response h(tau), normalised so that its integral equals `fraction` (= 1 - f).
struct RamanModel {
  std::vector<RamanOscillator> oscillators;
  double fraction = 0.19;

  /// Single-oscillator silica fit (12.2 fs period scale, 32 fs damping),
  /// gain peak near 13 THz, expressed for pulse scale t0 in seconds.
  static RamanModel silica(double t0, double fraction = 0.19);
};

/// Sampled causal kernel and its spectra on a grid.
class RamanResponse {
 public:
  RamanResponse() = default;
  RamanResponse(const RamanModel& model, GridPtr grid);

  /// True for the ideal limit (no oscillators or zero fraction): the kernel is identically zero.
  bool empty() const noexcept {
    return std::all_of(kernel_.begin(), kernel_.end(), [](double h) { return h == 0.0; });
  }
  const Grid& grid() const { return *grid_; }

  /// h(j dtau), j = 0..n-1 lag index (wrap-around lags unused, kernel decays first).
  std::span<const double> kernel() const noexcept { return kernel_; }
  /// sum_j h_j dtau.
  double integral() const;
  /// DFT(h) * dtau in FFT order; multiplying DFT(I) by this and inverse
  /// transforming (with 1/n) gives the circular convolution (h * I)(tau).
  std::span<const Complex> convolution_spectrum() const noexcept { return convolution_spectrum_; }
  /// h~(omega_k) = sum_j h_j exp(+i omega_k j dtau) dtau; Im part is the Raman gain.
  std::span<const Complex> response() const noexcept { return response_; }
  /// Frequency (1/t0 units, >= 0) of the maximum of Im h~.
  double gain_peak() const;

 private:
  GridPtr grid_;
  std::vector<double> kernel_;
  ComplexVector convolution_spectrum_;
  ComplexVector response_;
};

/// An empty oscillator list gives the zero kernel. Throws ConfigError when a
/// non-empty model cannot be normalised (all strengths zero).
RamanResponse build_raman_response(const RamanModel& model, GridPtr grid);

/// Thermal occupation 1/(exp(hbar omega/(k_B T)) - 1) of a phonon at
/// scaled angular frequency omega (physical omega/t0). Zero for T = 0.
double thermal_occupation(double omega_scaled, double temperature, double t0);

/// Stationary real Gaussian phonon noise Gamma_v(tau) for one step of length dzeta.
/// Spectral density S(omega) = |Im h~(omega)| / nbar * (n_th(|omega|, T) + 1/2),
/// i.e. <Gamma(zeta,tau) Gamma(zeta',tau')> = delta(zeta-zeta') int domega/2pi S e^{-i omega (tau-tau')}.
class PhononNoise {
 public:
  PhononNoise() = default;
  PhononNoise(const RamanResponse& response, double temperature, double nbar, double t0);

  bool empty() const noexcept { return density_.empty(); }
  std::span<const double> density() const noexcept { return density_; }

  /// Adds the DFT (FFT order, unnormalised, consistent with Grid::dft_backward/n)
  /// of one draw of Gamma_v for step dzeta into `spectrum`.
  void add_spectral_draw(std::span<Complex> spectrum, double dzeta, Rng& rng) const;

  /// One draw of Gamma_v(tau_j) in the time domain.
  std::vector<double> sample(const Grid& grid, double dzeta, Rng& rng) const;

 private:
  std::vector<double> density_;
  double window_ = 0.0;
};

/// One standalone draw of Gamma_v(tau_j). Throws ConfigError for temperature < 0.
std::vector<double> sample_phonon_noise(const RamanModel& model, GridPtr grid, double temperature,
                                        double nbar, double t0, double dzeta, Rng& rng);

}  // namespace sqz
