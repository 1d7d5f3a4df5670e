#include "sqz/interferometer.hpp"

#include <cmath>
#include <string>

#include "sqz/error.hpp"

namespace sqz {

std::string_view to_string(ArmKind kind) {
  switch (kind) {
    case ArmKind::nonlinear: return "nonlinear";
    case ArmKind::free: return "free";
    case ArmKind::vacuum: return "vacuum";
  }
  return "unknown";
}

ArmKind arm_kind_from_string(std::string_view name) {
  if (name == "nonlinear") return ArmKind::nonlinear;
  if (name == "free") return ArmKind::free;
  if (name == "vacuum") return ArmKind::vacuum;
  throw ConfigError("unknown arm kind '" + std::string(name) + "'");
}

TopologySpec TopologySpec::sagnac(double ratio, double zeta, PhysicsParams physics) {
  TopologySpec spec;
  spec.split_ratio = ratio;
  spec.loop = true;
  spec.arm_a = physics;
  spec.arm_b = ArmSpec{ArmKind::nonlinear, std::move(physics)};
  spec.zeta = zeta;
  return spec;
}

TopologySpec TopologySpec::free_arm(double ratio, double zeta, PhysicsParams physics) {
  TopologySpec spec;
  spec.split_ratio = ratio;
  spec.loop = false;
  spec.arm_a = physics;
  physics.nonlinear = false;
  physics.raman.reset();
  physics.electronic_fraction = 1.0;
  spec.arm_b = ArmSpec{ArmKind::free, std::move(physics)};
  spec.zeta = zeta;
  return spec;
}

double TopologySpec::effective_recombine_ratio() const {
  if (loop || !recombine_ratio) return split_ratio;
  return *recombine_ratio;
}

ArmSpec TopologySpec::effective_arm_b() const {
  if (loop) return ArmSpec{ArmKind::nonlinear, arm_a};
  ArmSpec arm = arm_b;
  if (arm.kind == ArmKind::free) arm.physics.nonlinear = false;
  return arm;
}

void TopologySpec::validate() const {
  auto check_ratio = [](double r, const char* what) {
    if (!(r > 0.0 && r < 1.0)) throw ConfigError(std::string(what) + " must lie in (0, 1)");
  };
  check_ratio(split_ratio, "split_ratio");
  check_ratio(effective_recombine_ratio(), "recombine_ratio");
  if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw ConfigError("zeta must be finite and >= 0");
  if (!std::isfinite(phase_shift)) throw ConfigError("phase_shift must be finite");
  arm_a.validate();
  effective_arm_b().physics.validate();
}

namespace {

void mix(std::span<const Complex> a, std::span<const Complex> b, double ratio, bool conjugate,
         std::span<Complex> c, std::span<Complex> d) {
  const double t = std::sqrt(ratio);
  const Complex r(0.0, conjugate ? -std::sqrt(1.0 - ratio) : std::sqrt(1.0 - ratio));
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Complex ca = a[j];
    const Complex cb = b[j];
    c[j] = t * ca + r * cb;
    d[j] = r * ca + t * cb;
  }
}

}  // namespace

std::pair<FieldState, FieldState> beamsplit(const FieldState& a, const FieldState& b, double ratio) {
  if (a.size() != b.size() || a.doubled() != b.doubled())
    throw ConfigError("beamsplitter inputs must share grid and representation");
  FieldState c{ComplexVector(a.size()), {}};
  FieldState d{ComplexVector(a.size()), {}};
  mix(a.phi, b.phi, ratio, false, c.phi, d.phi);
  if (a.doubled()) {
    c.phi_dagger.resize(a.size());
    d.phi_dagger.resize(a.size());
    mix(a.phi_dagger, b.phi_dagger, ratio, true, c.phi_dagger, d.phi_dagger);
  }
  return {std::move(c), std::move(d)};
}

std::pair<PulseField, PulseField> beamsplit(const PulseField& a, const PulseField& b, double ratio) {
  if (a.grid == nullptr || b.grid == nullptr || !(*a.grid == *b.grid))
    throw ConfigError("beamsplitter inputs must share a grid");
  auto [c, d] = beamsplit(FieldState{a.samples, {}}, FieldState{b.samples, {}}, ratio);
  return {PulseField{a.grid, std::move(c.phi)}, PulseField{a.grid, std::move(d.phi)}};
}

Interferometer::Interferometer(GridPtr grid, TopologySpec spec)
    : grid_(std::move(grid)), spec_(std::move(spec)), arm_b_(spec_.effective_arm_b()),
      propagator_a_((spec_.validate(), grid_), spec_.arm_a) {
  if (arm_b_.kind != ArmKind::vacuum) propagator_b_.emplace(grid_, arm_b_.physics);
}

OutputPorts Interferometer::recombine(const FieldState& arm_a, const FieldState& arm_b) const {
  FieldState shifted = arm_b;
  if (spec_.phase_shift != 0.0) {
    const Complex rot = std::polar(1.0, spec_.phase_shift);
    for (auto& s : shifted.phi) s *= rot;
    for (auto& s : shifted.phi_dagger) s *= std::conj(rot);
  }
  auto [transmitted, reflected] = beamsplit(arm_a, shifted, spec_.effective_recombine_ratio());
  return OutputPorts{std::move(transmitted), std::move(reflected)};
}

void Interferometer::run_checkpoints(const FieldState& input, std::span<const double> zetas, Representation rep,
                                     Rng* rng, const std::function<void(std::size_t, const OutputPorts&)>& sink) {
  if (input.size() != grid_->size()) throw ConfigError("input field size does not match grid");
  if (rep == Representation::positive_p && !input.doubled())
    throw ConfigError("positive-P input must be a doubled state");
  if (rep == Representation::wigner && rng == nullptr) throw ConfigError("Wigner runs need a random stream");

  FieldState vacuum{ComplexVector(input.size()), {}};
  if (input.doubled()) vacuum.phi_dagger.assign(input.size(), Complex{});
  if (rep == Representation::wigner) add_complex_noise(vacuum.phi, vacuum_variance(*grid_, spec_.arm_a.nbar), *rng);

  auto [arm_a, arm_b] = beamsplit(input, vacuum, spec_.split_ratio);
  double at = 0.0;
  for (std::size_t i = 0; i < zetas.size(); ++i) {
    if (zetas[i] < at) throw ConfigError("checkpoint distances must be non-decreasing");
    const double segment = zetas[i] - at;
    propagator_a_.propagate(arm_a, segment, rep, rng);
    if (propagator_b_) propagator_b_->propagate(arm_b, segment, rep, rng);
    at = zetas[i];
    sink(i, recombine(arm_a, arm_b));
  }
}

OutputPorts Interferometer::run(const FieldState& input, Representation rep, Rng* rng) {
  OutputPorts result;
  const double zeta = spec_.zeta;
  run_checkpoints(input, std::span<const double>(&zeta, 1), rep, rng,
                  [&](std::size_t, const OutputPorts& ports) { result = ports; });
  return result;
}

OutputPorts run_topology(const FieldState& input, GridPtr grid, const TopologySpec& spec, Representation rep,
                         Rng* rng) {
  Interferometer interferometer(std::move(grid), spec);
  return interferometer.run(input, rep, rng);
}

std::vector<double> interference_flux(const PulseField& first, const PulseField& second) {
  if (first.grid == nullptr || second.grid == nullptr || !(*first.grid == *second.grid))
    throw ConfigError("interference inputs must share a grid");
  const auto a = to_spectrum(first);
  const auto b = to_spectrum(second);
  std::vector<double> out(a.samples.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 2.0 * (std::conj(a.samples[k]) * b.samples[k]).imag();
  return out;
}

}  // namespace sqz
