#include "sqz/raman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sqz/error.hpp"

namespace sqz {

namespace {

constexpr double kHbar = 1.054571817e-34;    // J s
constexpr double kBoltzmann = 1.380649e-23;  // J/K

constexpr double kSilicaPeriodScale = 12.2e-15;  // s
constexpr double kSilicaDamping = 32e-15;        // s

}  // namespace

RamanModel RamanModel::silica(double t0, double fraction) {
  if (!(t0 > 0.0)) throw ConfigError("t0 must be positive");
  RamanModel model;
  model.fraction = fraction;
  model.oscillators.push_back(RamanOscillator{1.0, t0 / kSilicaPeriodScale, t0 / kSilicaDamping});
  return model;
}

RamanResponse::RamanResponse(const RamanModel& model, GridPtr grid) : grid_(std::move(grid)) {
  if (!(model.fraction >= 0.0 && model.fraction < 1.0))
    throw ConfigError("Raman fraction must lie in [0, 1)");
  const auto n = grid_->size();
  const double dtau = grid_->dtau();
  kernel_.assign(n, 0.0);
  convolution_spectrum_.assign(n, Complex{});
  response_.assign(n, Complex{});
  // Ideal limit: no delayed response at all.
  if (model.oscillators.empty() || model.fraction == 0.0) return;
  for (const auto& osc : model.oscillators) {
    if (osc.damping < 0.0 || !std::isfinite(osc.strength)) throw ConfigError("invalid Raman oscillator");
    for (std::size_t j = 0; j < n / 2; ++j) {
      const double lag = static_cast<double>(j) * dtau;
      kernel_[j] += osc.strength * std::exp(-osc.damping * lag) * std::sin(osc.center_frequency * lag);
    }
  }
  double area = 0.0;
  for (double h : kernel_) area += h * dtau;
  if (area == 0.0 || !std::isfinite(area)) throw ConfigError("Raman kernel cannot be normalised");
  const double scale = model.fraction / area;
  for (double& h : kernel_) h *= scale;

  ComplexVector kernel_complex(kernel_.begin(), kernel_.end());
  grid_->dft_forward(kernel_complex, convolution_spectrum_);
  for (std::size_t k = 0; k < n; ++k) {
    convolution_spectrum_[k] *= dtau;
    // exp(+i omega lag) is the complex conjugate of the forward DFT for real h.
    response_[k] = std::conj(convolution_spectrum_[k]);
  }
}

double RamanResponse::integral() const {
  double area = 0.0;
  for (double h : kernel_) area += h * grid_->dtau();
  return area;
}

double RamanResponse::gain_peak() const {
  const auto omega = grid_->omega();
  double best = -1.0;
  double at = 0.0;
  for (std::size_t k = 0; k < omega.size(); ++k) {
    if (omega[k] <= 0.0) continue;
    const double g = response_[k].imag();
    if (g > best) {
      best = g;
      at = omega[k];
    }
  }
  return at;
}

RamanResponse build_raman_response(const RamanModel& model, GridPtr grid) {
  return RamanResponse(model, std::move(grid));
}

double thermal_occupation(double omega_scaled, double temperature, double t0) {
  if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
  if (temperature == 0.0 || omega_scaled == 0.0) return 0.0;
  const double x = kHbar * std::fabs(omega_scaled) / (t0 * kBoltzmann * temperature);
  return 1.0 / std::expm1(x);
}

PhononNoise::PhononNoise(const RamanResponse& response, double temperature, double nbar, double t0)
    : window_(response.grid().window()) {
  if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
  if (!(nbar > 0.0)) throw ConfigError("nbar must be positive");
  const auto omega = response.grid().omega();
  const auto h = response.response();
  density_.resize(omega.size());
  for (std::size_t k = 0; k < omega.size(); ++k) {
    if (omega[k] == 0.0) {
      density_[k] = 0.0;
      continue;
    }
    const double occupation = thermal_occupation(omega[k], temperature, t0);
    density_[k] = std::fabs(h[k].imag()) / nbar * (occupation + 0.5);
  }
}

// Hermitian spectral draw G_k = sqrt(S_k T/dzeta) xi_k, E|xi_k|^2 = 1, returned as
// the unnormalised-DFT coefficients G_k/dtau so that dft_backward(.)/n is Gamma_v(tau_j).
void PhononNoise::add_spectral_draw(std::span<Complex> spectrum, double dzeta, Rng& rng) const {
  const auto n = density_.size();
  if (spectrum.size() != n) throw ConfigError("phonon noise size does not match grid");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double dtau = window_ / static_cast<double>(n);
  const double base = window_ / dzeta;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  auto amplitude = [&](std::size_t k) { return std::sqrt(density_[k] * base) / dtau; };
  spectrum[0] += amplitude(0) * normal(rng);
  spectrum[n / 2] += amplitude(n / 2) * normal(rng);
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double re = normal(rng) * inv_sqrt2;
    const double im = normal(rng) * inv_sqrt2;
    const double a = amplitude(k);
    const double b = amplitude(n - k);
    spectrum[k] += Complex(a * re, a * im);
    spectrum[n - k] += Complex(b * re, -b * im);
  }
}

std::vector<double> PhononNoise::sample(const Grid& grid, double dzeta, Rng& rng) const {
  const auto n = grid.size();
  ComplexVector spectrum(n);
  add_spectral_draw(spectrum, dzeta, rng);
  ComplexVector time(n);
  grid.dft_backward(spectrum, time);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = time[j].real() / static_cast<double>(n);
  return out;
}

std::vector<double> sample_phonon_noise(const RamanModel& model, GridPtr grid, double temperature,
                                        double nbar, double t0, double dzeta, Rng& rng) {
  if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
  const RamanResponse response(model, grid);
  const PhononNoise noise(response, temperature, nbar, t0);
  return noise.sample(*grid, dzeta, rng);
}

}  // namespace sqz
