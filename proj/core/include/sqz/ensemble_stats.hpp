#pragma once

#include <cstdint>
#include <vector>

#include "sqz/exact_sum.hpp"
#include "sqz/field_grid.hpp"
#include "sqz/state.hpp"

namespace sqz {

/// Raw power sums of (x - shift). The shift is fixed before accumulation
/// (the noise-free value of the observable) so finalisation does not cancel.
struct MomentSums {
  double shift = 0.0;
  ExactSum s1, s2, s3, s4;

  void add(double x);
  MomentSums& operator+=(const MomentSums& other);
  bool operator==(const MomentSums&) const = default;
};

/// Central sample moments; `variance` is the unbiased estimate and
/// `variance_se` uses the fourth central moment, not the Gaussian shortcut.
struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
  double third_central = 0.0;
  double fourth_central = 0.0;
};

SampleMoments summarize(const MomentSums& sums, std::uint64_t count);

/// Scalar per-trajectory observables for one output port.
struct PortSample {
  double photons = 0.0;           // n_raw
  double momentum = 0.0;          // P_raw
  double momentum_weight2 = 0.0;  // nbar sum_k w_k^2 q_k domega
};

/// Everything one trajectory contributes at one checkpoint.
struct CheckpointSample {
  PortSample transmitted;
  PortSample reflected;
  std::vector<double> spectrum;  // transmitted q_k (|phi~_k|^2 or Re phi~dag_k phi~_k)
  ComplexVector field;           // transmitted phi_j
};

struct TrajectorySample {
  std::vector<CheckpointSample> checkpoints;
};

/// Noise-free values used as accumulation shifts and as the analytic
/// coherent-state momentum baseline.
struct PortReference {
  double photons = 0.0;
  double momentum = 0.0;
  double momentum_baseline = 0.0;  // nbar sum_k w_k^2 |phi~_k|^2 domega of the deterministic output
  bool operator==(const PortReference&) const = default;
};

struct PortAccumulator {
  PortReference reference;
  MomentSums photons;
  MomentSums momentum;
  ExactSum cross;  // (n - shift)(P - shift)
  ExactSum momentum_weight2;

  void add(const PortSample& sample);
  PortAccumulator& operator+=(const PortAccumulator& other);
  bool operator==(const PortAccumulator&) const = default;
};

struct CheckpointAccumulator {
  double zeta = 0.0;
  PortAccumulator transmitted;
  PortAccumulator reflected;
  std::vector<ExactSum> spectrum;
  std::vector<ExactSum> field_re;
  std::vector<ExactSum> field_im;

  bool operator==(const CheckpointAccumulator&) const = default;
};

/// Merged statistics of an ensemble of trajectories. Every accumulator is an
/// exact sum, so merging disjoint ensembles is bit-identical to a single pass
/// over their union, independent of order and worker count.
class EnsembleStats {
 public:
  static constexpr double kMaxDivergedFraction = 1e-3;

  EnsembleStats() = default;
  EnsembleStats(Representation rep, double nbar, const Grid& grid, const std::vector<double>& zetas,
                const std::vector<std::pair<PortReference, PortReference>>& references);

  void add(const TrajectorySample& sample);
  void add_diverged() { ++diverged_; }
  EnsembleStats& merge(const EnsembleStats& other);

  Representation representation() const noexcept { return rep_; }
  double nbar() const noexcept { return nbar_; }
  std::size_t modes() const noexcept { return modes_; }
  double dtau() const noexcept { return dtau_; }
  double domega() const noexcept { return domega_; }
  std::uint64_t n_traj() const noexcept { return n_traj_; }
  std::uint64_t diverged() const noexcept { return diverged_; }
  double diverged_fraction() const noexcept;
  bool valid() const noexcept;

  std::size_t checkpoint_count() const noexcept { return checkpoints_.size(); }
  const CheckpointAccumulator& checkpoint(std::size_t i) const { return checkpoints_.at(i); }
  const std::vector<double>& momentum_weights() const noexcept { return weights_; }

  bool operator==(const EnsembleStats&) const = default;

 private:
  Representation rep_ = Representation::classical;
  double nbar_ = 1.0;
  std::size_t modes_ = 0;
  double dtau_ = 0.0;
  double domega_ = 0.0;
  std::vector<double> weights_;
  std::uint64_t n_traj_ = 0;
  std::uint64_t diverged_ = 0;
  std::vector<CheckpointAccumulator> checkpoints_;
};

}  // namespace sqz
