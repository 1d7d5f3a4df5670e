#include "sqz/ensemble_stats.hpp"

#include <cmath>

#include "sqz/error.hpp"

namespace sqz {

void MomentSums::add(double x) {
  const double y = x - shift;
  const double y2 = y * y;
  s1.add(y);
  s2.add(y2);
  s3.add(y2 * y);
  s4.add(y2 * y2);
}

MomentSums& MomentSums::operator+=(const MomentSums& other) {
  if (shift != other.shift) throw ConfigError("cannot merge moment sums with different shifts");
  s1 += other.s1;
  s2 += other.s2;
  s3 += other.s3;
  s4 += other.s4;
  return *this;
}

SampleMoments summarize(const MomentSums& sums, std::uint64_t count) {
  SampleMoments m;
  if (count == 0) return m;
  const long double n = static_cast<long double>(count);
  const long double r1 = sums.s1.value() / n;
  const long double r2 = sums.s2.value() / n;
  const long double r3 = sums.s3.value() / n;
  const long double r4 = sums.s4.value() / n;
  const long double c2 = r2 - r1 * r1;
  const long double c3 = r3 - 3 * r1 * r2 + 2 * r1 * r1 * r1;
  const long double c4 = r4 - 4 * r1 * r3 + 6 * r1 * r1 * r2 - 3 * r1 * r1 * r1 * r1;
  m.mean = static_cast<double>(sums.shift + r1);
  m.third_central = static_cast<double>(c3);
  m.fourth_central = static_cast<double>(c4);
  if (count > 1) {
    const long double var = c2 * n / (n - 1);
    m.variance = static_cast<double>(var < 0 ? 0 : var);
    m.mean_se = std::sqrt(m.variance / static_cast<double>(count));
    if (count > 3) {
      const long double var_of_var = (c4 - var * var * (n - 3) / (n - 1)) / n;
      m.variance_se = static_cast<double>(std::sqrt(var_of_var > 0 ? var_of_var : 0));
    }
  }
  return m;
}

void PortAccumulator::add(const PortSample& sample) {
  photons.add(sample.photons);
  momentum.add(sample.momentum);
  cross.add((sample.photons - photons.shift) * (sample.momentum - momentum.shift));
  momentum_weight2.add(sample.momentum_weight2);
}

PortAccumulator& PortAccumulator::operator+=(const PortAccumulator& other) {
  if (!(reference == other.reference)) throw ConfigError("cannot merge ensembles with different references");
  photons += other.photons;
  momentum += other.momentum;
  cross += other.cross;
  momentum_weight2 += other.momentum_weight2;
  return *this;
}

EnsembleStats::EnsembleStats(Representation rep, double nbar, const Grid& grid, const std::vector<double>& zetas,
                             const std::vector<std::pair<PortReference, PortReference>>& references)
    : rep_(rep), nbar_(nbar), modes_(grid.size()), dtau_(grid.dtau()), domega_(grid.domega()),
      weights_(grid.momentum_weight().begin(), grid.momentum_weight().end()) {
  if (references.size() != zetas.size()) throw ConfigError("one reference per checkpoint required");
  checkpoints_.resize(zetas.size());
  for (std::size_t i = 0; i < zetas.size(); ++i) {
    auto& c = checkpoints_[i];
    c.zeta = zetas[i];
    for (auto [port, ref] : {std::pair{&c.transmitted, references[i].first},
                             std::pair{&c.reflected, references[i].second}}) {
      port->reference = ref;
      port->photons.shift = ref.photons;
      port->momentum.shift = ref.momentum;
    }
    c.spectrum.resize(modes_);
    c.field_re.resize(modes_);
    c.field_im.resize(modes_);
  }
}

void EnsembleStats::add(const TrajectorySample& sample) {
  if (sample.checkpoints.size() != checkpoints_.size()) throw ConfigError("trajectory sample checkpoint mismatch");
  for (std::size_t i = 0; i < checkpoints_.size(); ++i) {
    auto& acc = checkpoints_[i];
    const auto& s = sample.checkpoints[i];
    acc.transmitted.add(s.transmitted);
    acc.reflected.add(s.reflected);
    if (s.spectrum.size() != modes_ || s.field.size() != modes_) throw ConfigError("trajectory sample size mismatch");
    for (std::size_t k = 0; k < modes_; ++k) {
      acc.spectrum[k].add(s.spectrum[k]);
      acc.field_re[k].add(s.field[k].real());
      acc.field_im[k].add(s.field[k].imag());
    }
  }
  ++n_traj_;
}

EnsembleStats& EnsembleStats::merge(const EnsembleStats& other) {
  if (rep_ != other.rep_ || nbar_ != other.nbar_ || modes_ != other.modes_ || dtau_ != other.dtau_ ||
      checkpoints_.size() != other.checkpoints_.size())
    throw ConfigError("cannot merge ensembles of different experiments");
  for (std::size_t i = 0; i < checkpoints_.size(); ++i) {
    auto& a = checkpoints_[i];
    const auto& b = other.checkpoints_[i];
    if (a.zeta != b.zeta) throw ConfigError("cannot merge ensembles with different checkpoints");
    a.transmitted += b.transmitted;
    a.reflected += b.reflected;
    for (std::size_t k = 0; k < modes_; ++k) {
      a.spectrum[k] += b.spectrum[k];
      a.field_re[k] += b.field_re[k];
      a.field_im[k] += b.field_im[k];
    }
  }
  n_traj_ += other.n_traj_;
  diverged_ += other.diverged_;
  return *this;
}

double EnsembleStats::diverged_fraction() const noexcept {
  const auto attempted = n_traj_ + diverged_;
  return attempted == 0 ? 0.0 : static_cast<double>(diverged_) / static_cast<double>(attempted);
}

bool EnsembleStats::valid() const noexcept { return n_traj_ >= 2 && diverged_fraction() <= kMaxDivergedFraction; }

}  // namespace sqz
