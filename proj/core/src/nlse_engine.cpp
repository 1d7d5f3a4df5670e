#include "sqz/nlse_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sqz/error.hpp"

namespace sqz {

std::string_view to_string(Dispersion d) { return d == Dispersion::anomalous ? "anomalous" : "normal"; }

Dispersion dispersion_from_string(std::string_view name) {
  if (name == "anomalous") return Dispersion::anomalous;
  if (name == "normal") return Dispersion::normal;
  throw ConfigError("unknown dispersion '" + std::string(name) + "'");
}

PhysicsParams PhysicsParams::ideal(double nbar, double dzeta) {
  PhysicsParams p;
  p.nbar = nbar;
  p.dzeta = dzeta;
  return p;
}

PhysicsParams PhysicsParams::with_raman(double nbar, double t0, double temperature, double loss_db_per_km,
                                        double dzeta) {
  PhysicsParams p;
  p.nbar = nbar;
  p.dzeta = dzeta;
  p.raman = RamanModel::silica(t0);
  p.electronic_fraction = 1.0 - p.raman->fraction;
  p.temperature = temperature;
  p.loss_db_per_km = loss_db_per_km;
  p.scales = PhysicalScales::from_nbar(t0, p.scales.k2_abs, p.scales.group_velocity, nbar);
  return p;
}

void PhysicsParams::validate() const {
  if (!(electronic_fraction > 0.0 && electronic_fraction <= 1.0))
    throw ConfigError("electronic fraction f must lie in (0, 1]");
  if (!(nbar > 0.0)) throw ConfigError("nbar must be positive");
  if (!(dzeta > 0.0)) throw ConfigError("dzeta must be positive");
  if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
  if (loss_db_per_km < 0.0) throw ConfigError("loss must be >= 0");
  if (!raman && electronic_fraction != 1.0)
    throw ConfigError("without a Raman model the electronic fraction must be 1");
  if (raman && std::fabs(raman->fraction - (1.0 - electronic_fraction)) > 1e-12)
    throw ConfigError("Raman fraction must equal 1 - f");
  if ((loss_db_per_km > 0.0 || raman) && !(scales.t0 > 0.0 && scales.k2_abs > 0.0))
    throw ConfigError("loss and Raman need positive t0 and |k''|");
}

double PhysicsParams::scaled_loss_rate() const {
  if (loss_db_per_km == 0.0) return 0.0;
  const double per_metre = loss_db_per_km * std::numbers::ln10 / 10.0 / 1000.0;
  return per_metre * scales.x0();
}

struct Propagator::Tables {
  std::vector<double> phase_rate;  // -(1/2)(1 -+ omega^2)
  std::optional<RamanResponse> raman;
  std::optional<PhononNoise> phonon;
  double loss_rate = 0.0;
  double vacuum = 0.0;
  double electronic_variance_rate = 0.0;  // f/(nbar dtau), multiply by h
};

Propagator::Propagator(GridPtr grid, PhysicsParams params) : grid_(std::move(grid)), params_(std::move(params)) {
  params_.validate();
  auto tables = std::make_shared<Tables>();
  const auto omega = grid_->omega();
  tables->phase_rate.resize(omega.size());
  const double sign = params_.dispersion == Dispersion::anomalous ? 1.0 : -1.0;
  for (std::size_t k = 0; k < omega.size(); ++k)
    tables->phase_rate[k] = -0.5 * (1.0 + sign * omega[k] * omega[k]);
  if (params_.raman && params_.nonlinear) {
    tables->raman.emplace(*params_.raman, grid_);
    tables->phonon.emplace(*tables->raman, params_.temperature, params_.nbar, params_.scales.t0);
  }
  tables->loss_rate = params_.scaled_loss_rate();
  tables->vacuum = vacuum_variance(*grid_, params_.nbar);
  tables->electronic_variance_rate = params_.electronic_fraction / (params_.nbar * grid_->dtau());
  tables_ = std::move(tables);

  const auto n = grid_->size();
  spectrum_.resize(n);
  intensity_.resize(n);
  intensity_spectrum_.resize(n);
}

const RamanResponse* Propagator::raman() const noexcept {
  return tables_->raman ? &*tables_->raman : nullptr;
}

const PhononNoise* Propagator::phonon_noise() const noexcept {
  return tables_->phonon ? &*tables_->phonon : nullptr;
}

const ComplexVector& Propagator::linear_multiplier(double h) {
  if (h != cached_h_) {
    const auto& rate = tables_->phase_rate;
    const double amplitude = std::exp(-0.5 * tables_->loss_rate * h) / static_cast<double>(grid_->size());
    cached_multiplier_.resize(rate.size());
    for (std::size_t k = 0; k < rate.size(); ++k) cached_multiplier_[k] = std::polar(amplitude, rate[k] * h);
    cached_h_ = h;
  }
  return cached_multiplier_;
}

void Propagator::linear_step(FieldState& state, double h, Representation rep, Rng* rng) {
  if (h == 0.0) return;
  const auto& multiplier = linear_multiplier(h);
  const auto n = grid_->size();
  grid_->dft_forward(state.phi, spectrum_);
  for (std::size_t k = 0; k < n; ++k) spectrum_[k] *= multiplier[k];
  grid_->dft_backward(spectrum_, state.phi);
  if (state.doubled()) {
    grid_->dft_forward(state.phi_dagger, spectrum_);
    for (std::size_t k = 0; k < n; ++k) spectrum_[k] *= std::conj(multiplier[k]);
    grid_->dft_backward(spectrum_, state.phi_dagger);
  }
  if (rep == Representation::wigner && tables_->loss_rate > 0.0) {
    if (rng == nullptr) throw ConfigError("Wigner propagation with loss needs a random stream");
    const double transmitted = std::exp(-tables_->loss_rate * h);
    add_complex_noise(state.phi, (1.0 - transmitted) * tables_->vacuum, *rng);
  }
}

void Propagator::nonlinear_step(FieldState& state, double h, Representation rep, Rng* rng,
                                const StepNoise* noise) {
  if (!params_.nonlinear || h == 0.0) return;
  const auto n = grid_->size();
  const bool doubled = state.doubled();
  if (rep == Representation::positive_p && !doubled)
    throw ConfigError("positive-P propagation needs a doubled field state");
  const bool stochastic = rep != Representation::classical;
  if (stochastic && noise == nullptr && rng == nullptr)
    throw ConfigError("stochastic propagation needs a random stream");

  for (std::size_t j = 0; j < n; ++j)
    intensity_[j] = doubled ? state.phi_dagger[j] * state.phi[j] : Complex(std::norm(state.phi[j]), 0.0);

  const double f = params_.electronic_fraction;
  const auto* raman = this->raman();
  const auto* phonon = this->phonon_noise();
  // intensity_spectrum_ ends up holding f*I + h*I + Gamma_v in the time domain.
  if (raman != nullptr) {
    grid_->dft_forward(intensity_, intensity_spectrum_);
    const auto kernel = raman->convolution_spectrum();
    for (std::size_t k = 0; k < n; ++k) intensity_spectrum_[k] *= kernel[k];
    if (stochastic && phonon != nullptr && noise == nullptr) phonon->add_spectral_draw(intensity_spectrum_, h, *rng);
    grid_->dft_backward(intensity_spectrum_, spectrum_);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) spectrum_[j] = f * intensity_[j] + spectrum_[j] * inv_n;
    if (stochastic && noise != nullptr && !noise->phonon.empty())
      for (std::size_t j = 0; j < n; ++j) spectrum_[j] += noise->phonon[j];
  } else {
    for (std::size_t j = 0; j < n; ++j) spectrum_[j] = f * intensity_[j];
  }

  if (!doubled) {
    for (std::size_t j = 0; j < n; ++j) {
      const double phase = spectrum_[j].real() * h;
      state.phi[j] *= Complex(std::cos(phase), std::sin(phase));
    }
    return;
  }

  // Positive-P: Ito multiplicative electronic noise, exponential map with
  // the Ito correction -+ i v/2 (v = variance of dW).
  const double variance = tables_->electronic_variance_rate * h;
  const Complex sqrt_i = std::polar(1.0, 0.25 * std::numbers::pi);
  const Complex sqrt_minus_i = std::conj(sqrt_i);
  const bool electronic = rep == Representation::positive_p;
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  for (std::size_t j = 0; j < n; ++j) {
    double dw = 0.0;
    double dw_dagger = 0.0;
    if (electronic) {
      if (noise != nullptr) {
        dw = noise->electronic.empty() ? 0.0 : noise->electronic[j];
        dw_dagger = noise->electronic_dagger.empty() ? 0.0 : noise->electronic_dagger[j];
      } else {
        dw = normal(*rng);
        dw_dagger = normal(*rng);
      }
    }
    const Complex drift = Complex(0.0, 1.0) * spectrum_[j] * h;
    const Complex ito = electronic ? Complex(0.0, 0.5 * variance) : Complex(0.0, 0.0);
    state.phi[j] *= std::exp(drift + sqrt_i * dw - ito);
    state.phi_dagger[j] *= std::exp(-drift + sqrt_minus_i * dw_dagger + ito);
  }
}

void Propagator::check_divergence(const FieldState& state, double zeta) const {
  for (std::size_t j = 0; j < state.size(); ++j) {
    const double a = std::abs(state.phi[j]);
    const double b = state.doubled() ? std::abs(state.phi_dagger[j]) : 0.0;
    if (!std::isfinite(a) || !std::isfinite(b) || a > divergence_threshold_ || b > divergence_threshold_)
      throw TrajectoryDiverged(zeta);
  }
}

void Propagator::propagate(FieldState& state, double zeta_total, Representation rep, Rng* rng) {
  if (zeta_total < 0.0) throw ConfigError("propagation distance must be >= 0");
  if (state.size() != grid_->size()) throw ConfigError("field size does not match grid");
  if (zeta_total == 0.0) return;

  if (!params_.nonlinear) {
    linear_step(state, zeta_total, rep, rng);
    return;
  }

  double peak = 0.0;
  for (const auto& s : state.phi) peak = std::max(peak, std::abs(s));
  for (const auto& s : state.phi_dagger) peak = std::max(peak, std::abs(s));
  divergence_threshold_ = 1e6 * std::max(peak, 1e-300);
  const bool watch = rep == Representation::positive_p;

  const double dz = params_.dzeta;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(zeta_total / dz - 1e-9)));
  const double last = zeta_total - static_cast<double>(steps - 1) * dz;
  auto step_length = [&](std::size_t s) { return s + 1 == steps ? last : dz; };

  // Adjacent linear half steps are fused: L(h1/2) N(h1) L((h1+h2)/2) N(h2) ... L(hn/2).
  linear_step(state, 0.5 * step_length(0), rep, rng);
  double zeta = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double h = step_length(s);
    nonlinear_step(state, h, rep, rng);
    const double next = s + 1 < steps ? step_length(s + 1) : 0.0;
    linear_step(state, 0.5 * (h + next), rep, rng);
    zeta += h;
    if (watch) check_divergence(state, zeta);
  }
}

PulseField linear_half_step(const PulseField& field, double dzeta, const PhysicsParams& params) {
  Propagator propagator(field.grid, params);
  FieldState state{field.samples, {}};
  propagator.linear_step(state, 0.5 * dzeta, Representation::classical);
  return PulseField{field.grid, std::move(state.phi)};
}

PulseField nonlinear_step(const PulseField& field, double dzeta, const PhysicsParams& params,
                          const StepNoise* noise) {
  Propagator propagator(field.grid, params);
  FieldState state{field.samples, {}};
  const auto rep = noise != nullptr ? Representation::wigner : Representation::classical;
  propagator.nonlinear_step(state, dzeta, rep, nullptr, noise);
  return PulseField{field.grid, std::move(state.phi)};
}

PulseField propagate(const PulseField& field, double zeta_total, const PhysicsParams& params,
                     Representation rep, Rng* rng) {
  Propagator propagator(field.grid, params);
  FieldState state{field.samples, {}};
  if (rep == Representation::positive_p) throw ConfigError("use Propagator for positive-P pairs");
  propagator.propagate(state, zeta_total, rep, rng);
  return PulseField{field.grid, std::move(state.phi)};
}

}  // namespace sqz
