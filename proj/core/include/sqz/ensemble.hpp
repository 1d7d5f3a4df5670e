#pragma once

#include <cstdint>
#include <vector>

#include "sqz/ensemble_stats.hpp"
#include "sqz/interferometer.hpp"
#include "sqz/state.hpp"

namespace sqz {

/// A sech(tau) input of the given amplitude fed into a topology, observed
/// at each checkpoint distance (defaults to topology.zeta).
struct Experiment {
  GridPtr grid;
  TopologySpec topology;
  Representation representation = Representation::wigner;
  double amplitude = 1.0;
  std::vector<double> checkpoints;

  double nbar() const noexcept { return topology.arm_a.nbar; }
  std::vector<double> effective_checkpoints() const;
  PulseField input() const;
};

/// Trajectory indices [first, first + count).
struct TrajectoryRange {
  std::uint64_t first = 0;
  std::uint64_t count = 0;
};

/// Simulates one trajectory into a sample; throws TrajectoryDiverged.
TrajectorySample run_trajectory(Interferometer& interferometer, const Experiment& experiment,
                                std::uint64_t base_seed, std::uint64_t index);

/// Noise-free references (accumulation shifts, coherent momentum baselines).
std::vector<std::pair<PortReference, PortReference>> reference_outputs(const Experiment& experiment);

/// Runs the trajectories on `workers` threads. Trajectory k always uses
/// trajectory_rng(base_seed, k), and accumulation is exact, so the result is
/// bit-identical for any worker count and partitioning.
EnsembleStats run_ensemble(const Experiment& experiment, TrajectoryRange range, std::uint64_t base_seed,
                           unsigned workers = 1);
/// n_traj >= 2 trajectories starting at index 0.
EnsembleStats run_ensemble(const Experiment& experiment, std::uint64_t n_traj, std::uint64_t base_seed,
                           unsigned workers = 1);

}  // namespace sqz
