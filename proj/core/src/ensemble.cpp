#include "sqz/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "sqz/error.hpp"
#include "sqz/observables.hpp"

namespace sqz {

std::vector<double> Experiment::effective_checkpoints() const {
  if (checkpoints.empty()) return {topology.zeta};
  return checkpoints;
}

PulseField Experiment::input() const { return sech_pulse(amplitude, grid); }

namespace {

CheckpointSample make_checkpoint_sample(const OutputPorts& ports, double nbar, const Grid& grid) {
  CheckpointSample sample;
  sample.spectrum = spectral_occupation(ports.transmitted, grid);
  sample.transmitted = port_sample(sample.spectrum, ports.transmitted, nbar, grid);
  const auto reflected_occupation = spectral_occupation(ports.reflected, grid);
  sample.reflected = port_sample(reflected_occupation, ports.reflected, nbar, grid);
  sample.field = ports.transmitted.phi;
  return sample;
}

}  // namespace

TrajectorySample run_trajectory(Interferometer& interferometer, const Experiment& experiment,
                                std::uint64_t base_seed, std::uint64_t index) {
  auto rng = trajectory_rng(base_seed, index);
  const auto input = experiment.input();
  const auto state = sample_initial(input, experiment.representation, experiment.nbar(), rng);
  const auto zetas = experiment.effective_checkpoints();
  TrajectorySample sample;
  sample.checkpoints.resize(zetas.size());
  interferometer.run_checkpoints(state, zetas, experiment.representation, &rng,
                                 [&](std::size_t i, const OutputPorts& ports) {
                                   sample.checkpoints[i] =
                                       make_checkpoint_sample(ports, experiment.nbar(), *experiment.grid);
                                 });
  return sample;
}

std::vector<std::pair<PortReference, PortReference>> reference_outputs(const Experiment& experiment) {
  Interferometer interferometer(experiment.grid, experiment.topology);
  const auto input = experiment.input();
  const auto zetas = experiment.effective_checkpoints();
  const double nbar = experiment.nbar();
  const auto& grid = *experiment.grid;
  std::vector<std::pair<PortReference, PortReference>> refs(zetas.size());
  interferometer.run_checkpoints(FieldState{input.samples, {}}, zetas, Representation::classical, nullptr,
                                 [&](std::size_t i, const OutputPorts& ports) {
                                   auto reference = [&](const FieldState& s) {
                                     const auto q = spectral_occupation(s, grid);
                                     const auto p = port_sample(q, s, nbar, grid);
                                     return PortReference{p.photons, p.momentum, p.momentum_weight2};
                                   };
                                   refs[i] = {reference(ports.transmitted), reference(ports.reflected)};
                                 });
  return refs;
}

EnsembleStats run_ensemble(const Experiment& experiment, TrajectoryRange range, std::uint64_t base_seed,
                           unsigned workers) {
  if (experiment.grid == nullptr) throw ConfigError("experiment has no grid");
  experiment.topology.validate();
  const auto zetas = experiment.effective_checkpoints();
  const auto refs = reference_outputs(experiment);
  const EnsembleStats empty(experiment.representation, experiment.nbar(), *experiment.grid, zetas, refs);

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(1, range.count))));
  std::vector<EnsembleStats> partial(workers, empty);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&](unsigned w) {
    try {
      Interferometer interferometer(experiment.grid, experiment.topology);
      for (std::uint64_t i = next++; i < range.count; i = next++) {
        try {
          partial[w].add(run_trajectory(interferometer, experiment, base_seed, range.first + i));
        } catch (const TrajectoryDiverged&) {
          partial[w].add_diverged();
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = range.count;
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  if (failure) std::rethrow_exception(failure);

  EnsembleStats total = empty;
  for (const auto& p : partial) total.merge(p);
  return total;
}

EnsembleStats run_ensemble(const Experiment& experiment, std::uint64_t n_traj, std::uint64_t base_seed,
                           unsigned workers) {
  if (n_traj < 2) throw ConfigError("an ensemble needs at least two trajectories");
  return run_ensemble(experiment, TrajectoryRange{0, n_traj}, base_seed, workers);
}

}  // namespace sqz
