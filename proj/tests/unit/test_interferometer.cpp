#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sqz/ensemble.hpp"
#include "sqz/error.hpp"
#include "sqz/interferometer.hpp"
#include "sqz/observables.hpp"

using namespace sqz;

namespace {

constexpr double kPi = std::numbers::pi;

PulseField random_field(GridPtr g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto f = zero_field(g);
  for (auto& v : f.samples) v = {normal(rng), normal(rng)};
  return f;
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

FieldState classical(const PulseField& f) { return FieldState{f.samples, {}}; }

}  // namespace

TEST_CASE("beamsplitter is unitary") {
  auto g = make_grid(128, 20.0);
  const auto a = random_field(g, 1);
  const auto b = random_field(g, 2);
  for (double rho : {0.1, 0.5, 0.6, 0.9, 0.999}) {
    const auto [c, d] = beamsplit(a, b, rho);
    CHECK(std::abs(c.flux() + d.flux() - a.flux() - b.flux()) / (a.flux() + b.flux()) < 1e-12);
    // Pointwise inner products are preserved too.
    for (std::size_t j = 0; j < g->size(); ++j) {
      const double in = std::norm(a.samples[j]) + std::norm(b.samples[j]);
      const double out = std::norm(c.samples[j]) + std::norm(d.samples[j]);
      CHECK(std::abs(out - in) <= 1e-12 * in);
    }
  }
}

TEST_CASE("balanced splitter halves the flux pointwise") {
  auto g = make_grid(64, 16.0);
  const auto a = sech_pulse(1.0, g);
  const auto [c, d] = beamsplit(a, zero_field(g), 0.5);
  for (std::size_t j = 0; j < g->size(); ++j) {
    CHECK(std::norm(c.samples[j]) == doctest::Approx(std::norm(a.samples[j]) / 2).epsilon(1e-14));
    CHECK(std::norm(d.samples[j]) == doctest::Approx(std::norm(a.samples[j]) / 2).epsilon(1e-14));
  }
  // Two cascaded balanced splitters route everything into one port.
  const auto [e, f] = beamsplit(c, d, 0.5);
  const double total = e.flux() + f.flux();
  CHECK(std::min(e.flux(), f.flux()) / total < 1e-14);
  CHECK_THROWS_AS(beamsplit(a, zero_field(make_grid(128, 16.0)), 0.5), ConfigError);
}

TEST_CASE("zero input gives zero output") {
  auto g = make_grid(256, 25.0);
  const auto spec = TopologySpec::sagnac(0.9, kPi, PhysicsParams::ideal(1e8, 0.01));
  const auto out = run_topology(classical(zero_field(g)), g, spec, Representation::classical, nullptr);
  for (auto v : out.transmitted.phi) CHECK(v == Complex{});
  for (auto v : out.reflected.phi) CHECK(v == Complex{});
}

TEST_CASE("near-unit splitter reduces to single-arm propagation") {
  auto g = make_grid(256, 25.0);
  const auto params = PhysicsParams::ideal(1e8, 0.01);
  const auto input = sech_pulse(1.4, g);
  const auto single = propagate(input, 2.0, params);
  const double rho = 1.0 - 1e-10;
  const auto out = run_topology(classical(input), g, TopologySpec::sagnac(rho, 2.0, params),
                                Representation::classical, nullptr);
  CHECK(max_abs_diff(out.transmitted.phi, single.samples) < 1e-8);
}

TEST_CASE("Mach-Zehnder phase sweep visibility") {
  auto g = make_grid(128, 25.0);
  auto params = PhysicsParams::ideal(1e8, 0.01);
  params.nonlinear = false;
  for (double rho : {0.9, 0.6}) {
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 64; ++i) {
      auto spec = TopologySpec::free_arm(rho, 1.0, params);
      spec.arm_a.nonlinear = false;
      spec.recombine_ratio = 0.5;
      spec.phase_shift = 2.0 * kPi * i / 64;
      const auto out = run_topology(classical(sech_pulse(1.0, g)), g, spec, Representation::classical, nullptr);
      const double e = flux(out.transmitted.phi, g->dtau());
      // Expected: (flux/2)(1 - V cos theta).
      CHECK(e == doctest::Approx(1.0 - 2.0 * std::sqrt(rho * (1 - rho)) * std::cos(spec.phase_shift)).epsilon(1e-10));
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    CHECK((hi - lo) / (hi + lo) == doctest::Approx(2.0 * std::sqrt(rho * (1 - rho))).epsilon(1e-10));
  }
}

TEST_CASE("loop reciprocity") {
  auto g = make_grid(256, 25.0);
  const auto params = PhysicsParams::ideal(1e8, 0.01);
  const auto input = classical(sech_pulse(1.5, g));
  const auto loop = run_topology(input, g, TopologySpec::sagnac(0.9, 1.0, params), Representation::classical, nullptr);
  TopologySpec mz = TopologySpec::sagnac(0.9, 1.0, params);
  mz.loop = false;
  mz.arm_b = ArmSpec{ArmKind::nonlinear, params};
  const auto swapped = run_topology(input, g, mz, Representation::classical, nullptr);
  CHECK(max_abs_diff(loop.transmitted.phi, swapped.transmitted.phi) == 0.0);
  CHECK(max_abs_diff(loop.reflected.phi, swapped.reflected.phi) == 0.0);
}

TEST_CASE("vacuum arm is not propagated") {
  auto g = make_grid(128, 25.0);
  auto spec = TopologySpec::sagnac(0.9, 1.0, PhysicsParams::ideal(1e8, 0.01));
  spec.loop = false;
  spec.arm_b.kind = ArmKind::vacuum;
  const auto out = run_topology(classical(sech_pulse(1.0, g)), g, spec, Representation::classical, nullptr);
  // Arm b carried i sqrt(0.1) phi untouched; the reflected port mixes it back.
  CHECK(flux(out.transmitted.phi, g->dtau()) + flux(out.reflected.phi, g->dtau()) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("interference term") {
  auto g = make_grid(128, 25.0);
  const auto a = sech_pulse(1.0, g);
  for (double v : interference_flux(a, a)) CHECK(v == 0.0);
  auto b = a;
  for (auto& s : b.samples) s *= Complex(0.0, 1.0);
  const auto spectrum = to_spectrum(a);
  const auto term = interference_flux(a, b);
  for (std::size_t k = 0; k < term.size(); ++k)
    CHECK(term[k] == doctest::Approx(2.0 * std::norm(spectrum.samples[k])).epsilon(1e-12));
}

TEST_CASE("topology validation") {
  auto spec = TopologySpec::sagnac(1.0, 1.0, PhysicsParams::ideal());
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.split_ratio = 0.9;
  spec.zeta = -1.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  CHECK(arm_kind_from_string("free") == ArmKind::free);
  CHECK_THROWS_AS(arm_kind_from_string("wormhole"), ConfigError);
}

TEST_CASE("phase shifter moves statistics across shot noise") {
  auto g = make_grid(512, 25.0);
  std::vector<double> fano;
  for (double theta : {0.0, 0.5 * kPi, kPi, 1.5 * kPi}) {
    auto spec = TopologySpec::sagnac(0.9, kPi, PhysicsParams::ideal(1e8, 0.01));
    spec.phase_shift = theta;
    const Experiment e{g, spec, Representation::wigner, 1.5, {}};
    fano.push_back(squeezing_db(run_ensemble(e, 200, 9)).fano);
  }
  const auto [lo, hi] = std::minmax_element(fano.begin(), fano.end());
  CHECK(*lo < 1.0);
  CHECK(*hi > 1.0);
}
