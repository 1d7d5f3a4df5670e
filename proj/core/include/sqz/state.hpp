#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "sqz/field_grid.hpp"

namespace sqz {

enum class Representation { classical, wigner, positive_p };

std::string_view to_string(Representation rep);
Representation representation_from_string(std::string_view name);

/// Per-trajectory random stream.
using Rng = std::mt19937_64;

/// Counter-based seeding: the stream for trajectory `index` depends only on
/// (base_seed, index), never on scheduling.
Rng trajectory_rng(std::uint64_t base_seed, std::uint64_t index);

/// One trajectory's field. In the positive-P representation `phi_dagger`
/// is an independent variable (not conj(phi)); otherwise it is empty.
struct FieldState {
  ComplexVector phi;
  ComplexVector phi_dagger;

  bool doubled() const noexcept { return !phi_dagger.empty(); }
  std::size_t size() const noexcept { return phi.size(); }
};

/// Per-sample variance <|delta_j|^2> of symmetric-ordering vacuum noise:
/// half a photon per mode, in flux units.
double vacuum_variance(const Grid& grid, double nbar);

/// Adds complex Gaussian noise with <|delta|^2> = variance to every sample.
void add_complex_noise(std::span<Complex> samples, double variance, Rng& rng);

/// classical: mean unchanged; wigner: mean + vacuum noise;
/// positive_p: (mean, conj(mean)) without noise.
FieldState sample_initial(const PulseField& mean, Representation rep, double nbar, Rng& rng);

}  // namespace sqz
