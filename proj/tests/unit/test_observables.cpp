#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sqz/ensemble.hpp"
#include "sqz/error.hpp"
#include "sqz/observables.hpp"

using namespace sqz;

namespace {

constexpr double kPi = std::numbers::pi;

Experiment zero_length(GridPtr g, double amplitude) {
  return Experiment{g, TopologySpec::sagnac(0.9, 0.0, PhysicsParams::ideal(1e8, 0.01)), Representation::wigner,
                    amplitude, {}};
}

}  // namespace

TEST_CASE("dB conventions") {
  CHECK(to_db(1.0) == 0.0);
  CHECK(to_db(0.1) == doctest::Approx(-10.0));
  CHECK(from_db(to_db(0.37)) == doctest::Approx(0.37));
  CHECK(below_shot_noise_db(-11.0) == 11.0);
}

TEST_CASE("ordering corrections") {
  CHECK(corrected_mean_photons(Representation::wigner, 300.0, 512) == 44.0);
  CHECK(corrected_mean_photons(Representation::positive_p, 300.0, 512) == 300.0);
  CHECK(corrected_photon_variance(Representation::wigner, 300.0, 0.0, 512) == 172.0);
  CHECK(corrected_photon_variance(Representation::positive_p, 50.0, 100.0, 512) == 150.0);
  CHECK(corrected_photon_variance(Representation::classical, 50.0, 100.0, 512) == 50.0);
}

TEST_CASE("photon number and spectrum of a coherent pulse") {
  auto g = make_grid(1024, 50.0);
  const auto f = sech_pulse(1.0, g);
  const FieldState s{f.samples, {}};
  CHECK(photon_number(s, 1e8, *g) == doctest::Approx(2e8).epsilon(1e-9));
  // Doubled state built from the same field gives the same numbers.
  FieldState doubled{f.samples, ComplexVector(f.samples.size())};
  for (std::size_t j = 0; j < f.samples.size(); ++j) doubled.phi_dagger[j] = std::conj(f.samples[j]);
  CHECK(photon_number(doubled, 1e8, *g) == doctest::Approx(2e8).epsilon(1e-12));
  const auto q = spectral_occupation(s, *g);
  const auto qd = spectral_occupation(doubled, *g);
  const auto omega = g->omega();
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double shape = (kPi / 2) / std::pow(std::cosh(kPi * omega[k] / 2), 2);  // sech^2 spectrum
    CHECK(std::abs(q[k] - shape) < 1e-9);
    CHECK(std::abs(qd[k] - q[k]) < 1e-14);
  }
}

TEST_CASE("momentum is zero for a real symmetric pulse and follows a frequency shift") {
  auto g = make_grid(512, 25.0);
  auto f = sech_pulse(1.2, g);
  CHECK(std::abs(momentum(FieldState{f.samples, {}}, 1e8, *g)) < 1e-6);
  const double w0 = 8 * g->domega();  // on-grid shift
  const auto tau = g->tau();
  for (std::size_t j = 0; j < g->size(); ++j) f.samples[j] *= std::polar(1.0, w0 * tau[j]);
  CHECK(momentum(FieldState{f.samples, {}}, 1e8, *g) == doctest::Approx(w0 * f.flux() * 1e8).epsilon(1e-9));
}

TEST_CASE("ensemble momentum mean vanishes for symmetric pulses") {
  auto g = make_grid(128, 25.0);
  const auto stats = run_ensemble(zero_length(g, 1.0), 2000, 4);
  const auto m = momentum_statistics(stats, 0);
  CHECK(std::abs(m.mean) < 3.0 * m.mean_se);
}

TEST_CASE("coherent momentum baseline at zero length") {
  auto g = make_grid(128, 25.0);
  const auto stats = run_ensemble(zero_length(g, 1.0), 10000, 6);
  const auto m = momentum_statistics(stats, 0);
  REQUIRE(m.valid);
  CHECK(std::abs(m.ratio - 1.0) < 3.0 * m.ratio_se);
  // Baseline equals the transmitted coherent amplitude (2 rho - 1) sech.
  const auto out = sech_pulse(0.8, g);
  CHECK(m.baseline == doctest::Approx(coherent_momentum_variance(out, 1e8)).epsilon(1e-12));
}

TEST_CASE("squeezing result flags") {
  auto g = make_grid(64, 25.0);
  EnsembleStats empty_stats(Representation::wigner, 1e8, *g, {0.0}, {{PortReference{}, PortReference{}}});
  const auto r = squeezing_db(empty_stats, 0);
  CHECK_FALSE(r.valid);
  CHECK_FALSE(r.diagnostic.empty());

  // 1000 accepted, 2 diverged: above the 0.1% limit.
  auto stats = run_ensemble(zero_length(g, 1.0), 1000, 3);
  stats.add_diverged();
  CHECK(stats.valid());
  stats.add_diverged();
  CHECK_FALSE(stats.valid());
  CHECK_FALSE(squeezing_db(stats).valid);
}

TEST_CASE("mean spectrum and field") {
  auto g = make_grid(128, 25.0);
  const auto stats = run_ensemble(zero_length(g, 1.0), 4000, 10);
  const auto expected = to_spectrum(sech_pulse(0.8, g));
  const auto q = mean_spectrum(stats, 0);
  double peak = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    peak = std::max(peak, std::norm(expected.samples[k]));
    worst = std::max(worst, std::abs(q[k] - std::norm(expected.samples[k])));
  }
  CHECK(worst / peak < 1e-3);
  const auto field = mean_field(stats, 0);
  const auto ref = sech_pulse(0.8, g);
  for (std::size_t j = 0; j < field.size(); ++j) CHECK(std::abs(field[j] - ref.samples[j]) < 1e-3);
}

TEST_CASE("self-phase modulation broadens the spectrum") {
  auto g = make_grid(512, 25.0);
  const auto input = sech_pulse(1.5, g);
  const auto output = propagate(input, kPi, PhysicsParams::ideal(1e8, 0.005));
  auto rms = [&](const PulseField& f) {
    const auto s = to_spectrum(f);
    const auto omega = g->omega();
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
      m0 += std::norm(s.samples[k]);
      m2 += std::norm(s.samples[k]) * omega[k] * omega[k];
    }
    return std::sqrt(m2 / m0);
  };
  CHECK(rms(output) > rms(input));
}

TEST_CASE("turning points") {
  std::vector<double> x, y;
  for (int i = 0; i <= 300; ++i) {
    x.push_back(-1.0 + i * 0.01);
    y.push_back(x.back() * x.back() * x.back() - x.back() / 3.0);  // extrema at +-1/3
  }
  const auto tp = find_turning_points(x, y);
  REQUIRE(tp.size() == 2);
  CHECK(tp[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-3));
  CHECK(tp[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  // Flat runs are skipped, not counted.
  const std::vector<double> fx{0, 1, 2, 3, 4}, fy{0, 1, 1, 1, 2};
  CHECK(find_turning_points(fx, fy).empty());
  CHECK_THROWS_AS(find_turning_points(fx, std::vector<double>{1, 2}), ConfigError);
}

TEST_CASE("input-output curve limits") {
  auto g = make_grid(256, 25.0);
  const std::vector<double> amplitudes{0.0, 0.5, 1.0, 1.5};
  const auto curve = io_curve(amplitudes, TopologySpec::sagnac(0.9, kPi, PhysicsParams::ideal(1e8, 0.01)), g);
  CHECK(curve.points[0].flux_scaled == 0.0);
  const auto unit = io_curve(amplitudes, TopologySpec::sagnac(1.0 - 1e-12, kPi, PhysicsParams::ideal(1e8, 0.01)), g);
  for (const auto& p : unit.points) CHECK(p.flux_scaled == doctest::Approx(2.0 * p.amplitude * p.amplitude).epsilon(1e-9));
}
