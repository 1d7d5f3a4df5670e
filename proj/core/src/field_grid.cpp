#include "sqz/field_grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "sqz/error.hpp"

namespace sqz {

namespace {

std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

}  // namespace

// FFTW plans created once per grid; execution with the new-array interface
// is thread-safe, plan creation and destruction are serialised.
class FftPlans {
 public:
  explicit FftPlans(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_1d(size, in, out, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_1d(size, in, out, FFTW_BACKWARD, flags);
    fftw_free(in);
    fftw_free(out);
  }
  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void execute(bool forward, std::span<const Complex> in, std::span<Complex> out) const {
    // FFTW does not write through `in` for out-of-place complex plans.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(forward ? forward_ : backward_, src, dst);
  }

 private:
  std::size_t n_;
  fftw_plan forward_;
  fftw_plan backward_;
};

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_size(std::size_t expected, std::size_t in, std::size_t out) {
  if (in != expected || out != expected) throw ConfigError("transform size does not match grid");
}

}  // namespace

Grid::Grid(std::size_t n_points, double window) : n_(n_points), window_(window) {
  if (!is_power_of_two(n_points) || n_points < 64)
    throw ConfigError("grid n_points must be a power of two >= 64, got " + std::to_string(n_points));
  if (!(window > 0.0) || !std::isfinite(window))
    throw ConfigError("grid window must be positive and finite");
  dtau_ = window / static_cast<double>(n_);
  domega_ = 2.0 * std::numbers::pi / window;
  tau_.resize(n_);
  omega_.resize(n_);
  momentum_weight_.resize(n_);
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  for (std::size_t j = 0; j < n_; ++j) {
    tau_[j] = (static_cast<double>(j) - static_cast<double>(half)) * dtau_;
    const auto q = static_cast<std::ptrdiff_t>(j) < half ? static_cast<std::ptrdiff_t>(j)
                                                         : static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(n_);
    omega_[j] = domega_ * static_cast<double>(q);
    momentum_weight_[j] = (q == -half) ? 0.0 : omega_[j];
  }
  plans_ = std::make_shared<const FftPlans>(n_);
}

std::vector<double> Grid::omega_sorted() const {
  std::vector<double> sorted(omega_);
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

double Grid::omega_nyquist() const noexcept { return domega_ * static_cast<double>(n_ / 2); }

void Grid::dft_forward(std::span<const Complex> in, std::span<Complex> out) const {
  check_size(n_, in.size(), out.size());
  plans_->execute(true, in, out);
}

void Grid::dft_backward(std::span<const Complex> in, std::span<Complex> out) const {
  check_size(n_, in.size(), out.size());
  plans_->execute(false, in, out);
}

// The centred time origin contributes (-1)^q per bin.
void Grid::to_spectrum(std::span<const Complex> time, std::span<Complex> spectrum) const {
  dft_forward(time, spectrum);
  const double scale = dtau_ / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < n_; ++k) spectrum[k] *= (k % 2 == 0) ? scale : -scale;
}

void Grid::from_spectrum(std::span<const Complex> spectrum, std::span<Complex> time) const {
  check_size(n_, spectrum.size(), time.size());
  ComplexVector shifted(spectrum.begin(), spectrum.end());
  const double scale = std::sqrt(2.0 * std::numbers::pi) / (dtau_ * static_cast<double>(n_));
  for (std::size_t k = 0; k < n_; ++k) shifted[k] *= (k % 2 == 0) ? scale : -scale;
  dft_backward(shifted, time);
}

void Grid::apply_diagonal(std::span<Complex> data, std::span<const Complex> multiplier) const {
  if (multiplier.size() != n_) throw ConfigError("spectral multiplier size does not match grid");
  ComplexVector spectrum(n_);
  dft_forward(data, spectrum);
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t k = 0; k < n_; ++k) spectrum[k] *= multiplier[k] * inv_n;
  dft_backward(spectrum, data);
}

GridPtr make_grid(std::size_t n_points, double window) {
  return std::make_shared<const Grid>(n_points, window);
}

double flux(std::span<const Complex> samples, double dtau) {
  double total = 0.0;
  for (const auto& s : samples) total += std::norm(s);
  return total * dtau;
}

double PulseField::flux() const { return sqz::flux(samples, grid->dtau()); }

double SpectralField::flux() const { return sqz::flux(samples, grid->domega()); }

PulseField zero_field(GridPtr grid) {
  const auto n = grid->size();
  return PulseField{std::move(grid), ComplexVector(n)};
}

PulseField sech_pulse(double amplitude, GridPtr grid) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw ConfigError("sech pulse amplitude must be finite and >= 0");
  PulseField field = zero_field(std::move(grid));
  const auto tau = field.grid->tau();
  for (std::size_t j = 0; j < tau.size(); ++j) field.samples[j] = amplitude / std::cosh(tau[j]);
  return field;
}

SpectralField to_spectrum(const PulseField& field) {
  SpectralField spectrum{field.grid, ComplexVector(field.grid->size())};
  field.grid->to_spectrum(field.samples, spectrum.samples);
  return spectrum;
}

PulseField from_spectrum(const SpectralField& spectrum) {
  PulseField field{spectrum.grid, ComplexVector(spectrum.grid->size())};
  spectrum.grid->from_spectrum(spectrum.samples, field.samples);
  return field;
}

PhysicalScales PhysicalScales::from_nbar(double t0, double k2_abs, double group_velocity, double nbar) {
  if (!(t0 > 0.0) || !(k2_abs > 0.0) || !(group_velocity > 0.0) || !(nbar > 0.0))
    throw ConfigError("physical scales must be positive");
  PhysicalScales scales{t0, k2_abs, group_velocity, 0.0};
  scales.chi = k2_abs * group_velocity * group_velocity / (t0 * nbar);
  return scales;
}

double PhysicalScales::nbar() const { return k2_abs * group_velocity * group_velocity / (chi * t0); }

double PhysicalScales::x0() const { return t0 * t0 / k2_abs; }

double PhysicalScales::soliton_period() const { return 0.5 * std::numbers::pi * x0(); }

}  // namespace sqz
