#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sqz/ensemble.hpp"
#include "sqz/interferometer.hpp"
#include "sqz/observables.hpp"

namespace sqz {

enum class Preset { single, fig1_io, fig2_scanN, fig3_scanZ };

std::string_view to_string(Preset preset);
Preset preset_from_string(std::string_view name);

struct GridSettings {
  std::size_t n_points = 512;
  double window = 25.0;
};

/// Grid for the free-arm series: the linearly dispersing weak pulse spreads
/// far beyond the default window over 16 soliton periods.
inline constexpr GridSettings kFreeArmGrid{1024, 200.0};
/// Minimum window for the normal-dispersion series.
inline constexpr double kNormalDispersionWindow = 50.0;

struct SweepSettings {
  std::vector<double> amplitudes;  // N list
  std::vector<double> zetas;       // zeta list
};

/// Complete, serialisable description of a run. Result metadata embeds this
/// verbatim so a run can be reproduced from its own output.
///
/// `nbar` is authoritative and copied into both arms. Raman presets use
/// nbar_raman (photon-number scale at t0 = 0.1 ps).
struct ExperimentConfig {
  Preset preset = Preset::single;
  TopologySpec topology = default_topology();
  Representation mode = Representation::wigner;
  double nbar = 1e8;
  double nbar_raman = 1e9;
  double amplitude = 1.5;
  std::uint64_t n_traj = 10000;
  std::uint64_t base_seed = 1;
  GridSettings grid;
  SweepSettings sweep;
  std::string output = "sqz_out";
  unsigned workers = 1;

  static TopologySpec default_topology();
};

std::string config_to_json(const ExperimentConfig& config);
/// Accepts either a config document or a result metadata document with a
/// "config" member. Throws ConfigError with line/column on malformed input.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ValidationReport {
  std::vector<std::string> warnings;
  std::vector<std::string> errors;

  bool ok() const noexcept { return errors.empty(); }
  bool empty() const noexcept { return warnings.empty() && errors.empty(); }
};

ValidationReport validate(const ExperimentConfig& config);

/// Fixed CSV headers.
inline constexpr std::string_view kIoCsvHeader = "ratio,zeta,N,flux_scaled";
inline constexpr std::string_view kScanCsvHeader = "ratio,zeta,N,mean_photons,variance_db,stderr_db,n_traj,diverged";

/// One (label, experiment) unit of a preset; scans report every checkpoint.
struct PresetJob {
  std::string label;  // CSV file stem
  Experiment experiment;
};

/// Ensemble jobs a scan preset expands into (empty for fig1_io).
std::vector<PresetJob> expand_scan_jobs(const ExperimentConfig& config);
/// Topologies of the fig1_io preset.
std::vector<TopologySpec> io_series(const ExperimentConfig& config);

std::string format_number(double value);  // 17 significant digits
std::string io_csv(const std::vector<IoCurve>& curves);
std::string scan_csv_row(double ratio, double amplitude, const SqueezingResult& result);

enum class ExitCode : int { ok = 0, failure = 1, config_error = 2, invalid_result = 3 };

struct RunReport {
  ExitCode code = ExitCode::ok;
  std::vector<std::filesystem::path> files;
  std::uint64_t diverged = 0;
  double wall_seconds = 0.0;
};

/// Runs a preset and writes CSV data plus a JSON metadata file into config.output.
RunReport run(const ExperimentConfig& config, std::ostream& log);

std::string_view version();

}  // namespace sqz
