#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sqz/ensemble.hpp"
#include "sqz/error.hpp"
#include "sqz/observables.hpp"
#include "sqz/state.hpp"

using namespace sqz;

namespace {

Experiment zero_length(GridPtr g, double amplitude, Representation rep = Representation::wigner) {
  return Experiment{g, TopologySpec::sagnac(0.9, 0.0, PhysicsParams::ideal(1e8, 0.01)), rep, amplitude, {}};
}

}  // namespace

TEST_CASE("Wigner vacuum noise carries half a photon per mode") {
  auto g = make_grid(128, 25.0);
  const double nbar = 1e8;
  const auto mean = zero_field(g);
  Rng rng(17);
  const int draws = 10000;
  double total = 0.0;
  for (int d = 0; d < draws; ++d) {
    const auto s = sample_initial(mean, Representation::wigner, nbar, rng);
    total += flux(s.phi, g->dtau()) * nbar;
  }
  CHECK(total / draws == doctest::Approx(g->size() / 2.0).epsilon(0.02));
  CHECK(vacuum_variance(*g, nbar) == doctest::Approx(1.0 / (2.0 * nbar * g->dtau())));
}

TEST_CASE("initial states per representation") {
  auto g = make_grid(64, 16.0);
  const auto mean = sech_pulse(1.2, g);
  Rng rng(3);
  const auto c = sample_initial(mean, Representation::classical, 1e8, rng);
  CHECK(c.phi == mean.samples);
  CHECK_FALSE(c.doubled());
  const auto p = sample_initial(mean, Representation::positive_p, 1e8, rng);
  REQUIRE(p.doubled());
  for (std::size_t j = 0; j < g->size(); ++j) {
    const Complex q = p.phi_dagger[j] * p.phi[j];
    CHECK(q.imag() == 0.0);
    CHECK(q.real() == std::norm(mean.samples[j]));
  }
  CHECK(representation_from_string("positive_p") == Representation::positive_p);
  CHECK_THROWS_AS(representation_from_string("husimi"), ConfigError);
}

TEST_CASE("coherent mean photon number is recovered") {
  auto g = make_grid(256, 25.0);
  const double nbar = 1e8;
  const auto mean = sech_pulse(1.0, g);
  Rng rng(8);
  MomentSums sums;
  sums.shift = 2.0 * nbar;
  const int draws = 10000;
  for (int d = 0; d < draws; ++d)
    sums.add(photon_number(sample_initial(mean, Representation::wigner, nbar, rng), nbar, *g));
  const auto m = summarize(sums, draws);
  const double corrected = corrected_mean_photons(Representation::wigner, m.mean, g->size());
  CHECK(corrected == doctest::Approx(2.0 * nbar).epsilon(1e-3));
}

TEST_CASE("single-mode Wigner ordering correction recovers Poisson statistics") {
  // One mode with amplitude alpha, |alpha|^2 = 100, vacuum noise <|delta|^2> = 1/2.
  const Complex alpha{6.0, 8.0};
  Rng rng(99);
  MomentSums sums;
  sums.shift = 100.0;
  const int draws = 200000;
  ComplexVector mode(1);
  for (int d = 0; d < draws; ++d) {
    mode[0] = alpha;
    add_complex_noise(mode, 0.5, rng);
    sums.add(std::norm(mode[0]));
  }
  const auto m = summarize(sums, draws);
  const double mean = corrected_mean_photons(Representation::wigner, m.mean, 1);
  const double variance = corrected_photon_variance(Representation::wigner, m.variance, m.mean, 1);
  CHECK(std::abs(mean - 100.0) < 3.0 * m.mean_se);
  CHECK(std::abs(variance - 100.0) < 3.0 * m.variance_se);
}

TEST_CASE("ensembles are seed deterministic and merge exactly") {
  auto g = make_grid(128, 25.0);
  const Experiment e{g, TopologySpec::sagnac(0.9, 0.3, PhysicsParams::ideal(1e8, 0.01)), Representation::wigner,
                     1.5, {0.1, 0.3}};
  const auto a = run_ensemble(e, 1000, 21);
  const auto b = run_ensemble(e, 1000, 21);
  CHECK(a == b);

  auto first = run_ensemble(e, TrajectoryRange{0, 500}, 21);
  const auto second = run_ensemble(e, TrajectoryRange{500, 500}, 21);
  first.merge(second);
  CHECK(first == a);

  CHECK(run_ensemble(e, 1000, 21, 3) == a);
  CHECK_FALSE(run_ensemble(e, 1000, 22) == a);
  CHECK_THROWS_AS(run_ensemble(e, 1, 21), ConfigError);

  const auto other = run_ensemble(zero_length(g, 1.0), 10, 1);
  auto copy = a;
  CHECK_THROWS_AS(copy.merge(other), ConfigError);
}

TEST_CASE("coherent input sits at shot noise") {
  auto g = make_grid(128, 25.0);
  for (auto rep : {Representation::wigner, Representation::positive_p}) {
    const auto stats = run_ensemble(zero_length(g, 1.0, rep), 10000, 5);
    const auto r = squeezing_db(stats);
    REQUIRE(r.valid);
    CHECK(std::abs(r.variance_db) <= 3.0 * r.std_error_db);
  }
}

TEST_CASE("variance standard error scales as one over root n") {
  auto g = make_grid(64, 25.0);
  const auto e = zero_length(g, 1.0);
  std::vector<double> se;
  for (std::uint64_t n : {1000u, 4000u, 16000u}) {
    const auto stats = run_ensemble(e, n, 77);
    se.push_back(summarize(stats.checkpoint(0).transmitted.photons, n).variance_se);
  }
  CHECK(se[0] / se[1] == doctest::Approx(2.0).epsilon(0.15));
  CHECK(se[1] / se[2] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("vacuum through the full topology has no photons") {
  auto g = make_grid(128, 25.0);
  const Experiment e{g, TopologySpec::sagnac(0.9, 1.0, PhysicsParams::ideal(1e8, 0.01)), Representation::wigner,
                     0.0, {}};
  const auto stats = run_ensemble(e, 2000, 13);
  const auto raw = summarize(stats.checkpoint(0).transmitted.photons, stats.n_traj());
  const double n = corrected_mean_photons(Representation::wigner, raw.mean, stats.modes());
  CHECK(std::abs(n) < 3.0 * raw.mean_se);
  const auto spectrum = mean_spectrum(stats, 0);
  double total = 0.0;
  for (double q : spectrum) total += q * g->domega();
  CHECK(std::abs(total * 1e8) < 3.0 * raw.mean_se);
}

TEST_CASE("sample moments") {
  MomentSums sums;
  sums.shift = 10.0;
  for (double x : {9.0, 10.0, 11.0, 14.0}) sums.add(x);
  const auto m = summarize(sums, 4);
  CHECK(m.mean == doctest::Approx(11.0));
  CHECK(m.variance == doctest::Approx(14.0 / 3.0));  // (4 + 1 + 0 + 9) / 3
  CHECK(m.mean_se == doctest::Approx(std::sqrt(14.0 / 3.0 / 4.0)));
  CHECK(m.third_central == doctest::Approx((-8.0 - 1.0 + 0.0 + 27.0) / 4.0));
  CHECK(m.fourth_central == doctest::Approx((16.0 + 1.0 + 0.0 + 81.0) / 4.0));
}
