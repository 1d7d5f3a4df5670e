#include "sqz/state.hpp"

#include <array>
#include <cmath>
#include <string>

#include "sqz/error.hpp"

namespace sqz {

std::string_view to_string(Representation rep) {
  switch (rep) {
    case Representation::classical: return "classical";
    case Representation::wigner: return "wigner";
    case Representation::positive_p: return "positive_p";
  }
  return "unknown";
}

Representation representation_from_string(std::string_view name) {
  if (name == "classical" || name == "deterministic") return Representation::classical;
  if (name == "wigner") return Representation::wigner;
  if (name == "positive_p" || name == "positive-p") return Representation::positive_p;
  throw ConfigError("unknown representation '" + std::string(name) + "'");
}

Rng trajectory_rng(std::uint64_t base_seed, std::uint64_t index) {
  std::array<std::uint32_t, 5> words{
      static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5157u};
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

double vacuum_variance(const Grid& grid, double nbar) { return 1.0 / (2.0 * nbar * grid.dtau()); }

void add_complex_noise(std::span<Complex> samples, double variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
  for (auto& s : samples) {
    const double re = normal(rng);
    const double im = normal(rng);
    s += Complex(re, im);
  }
}

FieldState sample_initial(const PulseField& mean, Representation rep, double nbar, Rng& rng) {
  if (!(nbar > 0.0)) throw ConfigError("nbar must be positive");
  FieldState state{mean.samples, {}};
  switch (rep) {
    case Representation::classical:
      break;
    case Representation::wigner:
      add_complex_noise(state.phi, vacuum_variance(*mean.grid, nbar), rng);
      break;
    case Representation::positive_p:
      state.phi_dagger.resize(state.phi.size());
      for (std::size_t j = 0; j < state.phi.size(); ++j) state.phi_dagger[j] = std::conj(state.phi[j]);
      break;
  }
  return state;
}

}  // namespace sqz
