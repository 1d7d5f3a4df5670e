#include "sqz/observables.hpp"

#include <cmath>
#include <numbers>

#include "sqz/error.hpp"

namespace sqz {

double photon_number(const FieldState& state, double nbar, const Grid& grid) {
  double total = 0.0;
  if (state.doubled()) {
    for (std::size_t j = 0; j < state.size(); ++j) total += (state.phi_dagger[j] * state.phi[j]).real();
  } else {
    for (const auto& s : state.phi) total += std::norm(s);
  }
  return nbar * total * grid.dtau();
}

std::vector<double> spectral_occupation(const FieldState& state, const Grid& grid) {
  const auto n = grid.size();
  ComplexVector spectrum(n);
  grid.to_spectrum(state.phi, spectrum);
  std::vector<double> q(n);
  if (!state.doubled()) {
    for (std::size_t k = 0; k < n; ++k) q[k] = std::norm(spectrum[k]);
    return q;
  }
  // Spectrum of phi_dagger with the conjugate transform: conj(F[conj(phi_dagger)]).
  ComplexVector conjugated(n);
  for (std::size_t j = 0; j < n; ++j) conjugated[j] = std::conj(state.phi_dagger[j]);
  ComplexVector dagger_spectrum(n);
  grid.to_spectrum(conjugated, dagger_spectrum);
  for (std::size_t k = 0; k < n; ++k) q[k] = (std::conj(dagger_spectrum[k]) * spectrum[k]).real();
  return q;
}

PortSample port_sample(std::span<const double> occupation, const FieldState& state, double nbar, const Grid& grid) {
  PortSample sample;
  sample.photons = photon_number(state, nbar, grid);
  const auto w = grid.momentum_weight();
  double first = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < occupation.size(); ++k) {
    first += w[k] * occupation[k];
    second += w[k] * w[k] * occupation[k];
  }
  sample.momentum = nbar * first * grid.domega();
  sample.momentum_weight2 = nbar * second * grid.domega();
  return sample;
}

double momentum(const FieldState& state, double nbar, const Grid& grid) {
  const auto q = spectral_occupation(state, grid);
  return port_sample(q, state, nbar, grid).momentum;
}

double corrected_mean_photons(Representation rep, double raw_mean, std::size_t modes) {
  return rep == Representation::wigner ? raw_mean - 0.5 * static_cast<double>(modes) : raw_mean;
}

double corrected_photon_variance(Representation rep, double raw_variance, double raw_mean, std::size_t modes) {
  switch (rep) {
    case Representation::classical: return raw_variance;
    case Representation::wigner: return raw_variance - 0.25 * static_cast<double>(modes);
    case Representation::positive_p: return raw_variance + raw_mean;
  }
  return raw_variance;
}

double to_db(double ratio) { return 10.0 * std::log10(ratio); }
double from_db(double db) { return std::pow(10.0, db / 10.0); }
double below_shot_noise_db(double variance_db) { return -variance_db; }

namespace {

const PortAccumulator& port_of(const CheckpointAccumulator& c, Port port) {
  return port == Port::transmitted ? c.transmitted : c.reflected;
}

constexpr double kDbPerNeper = 10.0 / std::numbers::ln10;

}  // namespace

SqueezingResult squeezing_db(const EnsembleStats& stats, std::size_t checkpoint, Port port) {
  const auto& c = stats.checkpoint(checkpoint);
  const auto& acc = port_of(c, port);
  const auto n = stats.n_traj();
  const auto raw = summarize(acc.photons, n);
  const auto rep = stats.representation();

  SqueezingResult r;
  r.zeta = c.zeta;
  r.representation = rep;
  r.n_traj = n;
  r.diverged = stats.diverged();
  r.mean_photons = corrected_mean_photons(rep, raw.mean, stats.modes());
  r.variance = corrected_photon_variance(rep, raw.variance, raw.mean, stats.modes());

  if (!stats.valid()) {
    r.diagnostic = n < 2 ? "fewer than two accepted trajectories"
                         : "diverged fraction " + std::to_string(stats.diverged_fraction()) + " exceeds limit";
    return r;
  }
  if (!(r.mean_photons > 0.0)) {
    r.diagnostic = "non-positive mean photon number";
    return r;
  }
  r.fano = r.variance / r.mean_photons;
  if (!(r.variance > 0.0)) {
    r.diagnostic = "non-positive corrected variance (ordering correction exceeds sampled variance)";
    return r;
  }
  r.variance_db = to_db(r.fano);
  // Delta method on log(V) - log(mu), including Cov(s^2, mean) = m3/n.
  double var_se = raw.variance_se;
  double mean_se = raw.mean_se;
  if (rep == Representation::positive_p) var_se = std::hypot(var_se, mean_se);
  const double rel_v = var_se / r.variance;
  const double rel_m = mean_se / r.mean_photons;
  const double cov = raw.third_central / static_cast<double>(n) / (r.variance * r.mean_photons);
  const double rel = rel_v * rel_v + rel_m * rel_m - 2.0 * cov;
  r.std_error_db = kDbPerNeper * std::sqrt(std::max(rel, rel_v * rel_v));
  r.valid = true;
  return r;
}

SqueezingResult squeezing_db(const EnsembleStats& stats) {
  if (stats.checkpoint_count() == 0) throw ConfigError("ensemble has no checkpoints");
  return squeezing_db(stats, stats.checkpoint_count() - 1, Port::transmitted);
}

MomentumResult momentum_statistics(const EnsembleStats& stats, std::size_t checkpoint, Port port) {
  const auto& c = stats.checkpoint(checkpoint);
  const auto& acc = port_of(c, port);
  const auto n = stats.n_traj();
  const auto raw = summarize(acc.momentum, n);
  MomentumResult r;
  r.mean = raw.mean;
  r.mean_se = raw.mean_se;
  r.variance_se = raw.variance_se;
  const auto& w = stats.momentum_weights();
  double weight2 = 0.0;
  for (double x : w) weight2 += x * x;
  switch (stats.representation()) {
    case Representation::classical: r.variance = raw.variance; break;
    case Representation::wigner: r.variance = raw.variance - 0.25 * weight2; break;
    case Representation::positive_p:
      r.variance = raw.variance + static_cast<double>(acc.momentum_weight2.value() / static_cast<long double>(n));
      break;
  }
  r.baseline = acc.reference.momentum_baseline;
  if (!stats.valid() || !(r.baseline > 0.0) || !(r.variance > 0.0)) return r;
  r.ratio = r.variance / r.baseline;
  r.ratio_se = r.variance_se / r.baseline;
  r.ratio_db = to_db(r.ratio);
  r.valid = true;
  return r;
}

double coherent_momentum_variance(const PulseField& field, double nbar) {
  const auto spectrum = to_spectrum(field);
  const auto w = field.grid->momentum_weight();
  double total = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) total += w[k] * w[k] * std::norm(spectrum.samples[k]);
  return nbar * total * field.grid->domega();
}

std::vector<double> mean_spectrum(const EnsembleStats& stats, std::size_t checkpoint) {
  const auto& c = stats.checkpoint(checkpoint);
  const long double n = static_cast<long double>(stats.n_traj());
  const double offset =
      stats.representation() == Representation::wigner ? 1.0 / (2.0 * stats.nbar() * stats.domega()) : 0.0;
  std::vector<double> out(c.spectrum.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<double>(c.spectrum[k].value() / n) - offset;
  return out;
}

ComplexVector mean_field(const EnsembleStats& stats, std::size_t checkpoint) {
  const auto& c = stats.checkpoint(checkpoint);
  const long double n = static_cast<long double>(stats.n_traj());
  ComplexVector out(c.field_re.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = Complex(static_cast<double>(c.field_re[k].value() / n), static_cast<double>(c.field_im[k].value() / n));
  return out;
}

std::vector<double> find_turning_points(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("turning-point abscissae and ordinates differ in length");
  std::vector<double> points;
  // (midpoint, slope) for every interval with non-zero slope
  std::vector<std::pair<double, double>> slopes;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double slope = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if (slope != 0.0) slopes.emplace_back(0.5 * (x[i] + x[i + 1]), slope);
  }
  for (std::size_t i = 0; i + 1 < slopes.size(); ++i) {
    const auto [xa, a] = slopes[i];
    const auto [xb, b] = slopes[i + 1];
    if ((a > 0.0) == (b > 0.0)) continue;
    points.push_back(xa + (xb - xa) * a / (a - b));
  }
  return points;
}

IoCurve io_curve(std::span<const double> amplitudes, const TopologySpec& spec, GridPtr grid) {
  IoCurve curve;
  curve.ratio = spec.split_ratio;
  curve.zeta = spec.zeta;
  Interferometer interferometer(grid, spec);
  std::vector<double> xs;
  std::vector<double> ys;
  for (double amplitude : amplitudes) {
    const auto input = sech_pulse(amplitude, grid);
    const auto ports = interferometer.run(FieldState{input.samples, {}}, Representation::classical, nullptr);
    const double scaled = flux(ports.transmitted.phi, grid->dtau());
    curve.points.push_back(IoPoint{amplitude, scaled});
    xs.push_back(amplitude);
    ys.push_back(scaled);
  }
  curve.turning_points = find_turning_points(xs, ys);
  return curve;
}

}  // namespace sqz
