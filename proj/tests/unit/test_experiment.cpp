#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sqz/error.hpp"
#include "sqz/experiment.hpp"

using namespace sqz;

namespace {

constexpr double kPi = std::numbers::pi;

bool mentions(const std::vector<std::string>& messages, std::string_view needle) {
  for (const auto& m : messages)
    if (m.find(needle) != std::string::npos) return true;
  return false;
}

std::filesystem::path scratch_dir(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / ("sqz_test_" + std::string(name));
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("default config validates cleanly") {
  const ExperimentConfig c;
  const auto report = validate(c);
  CHECK(report.empty());
  CHECK(c.topology.zeta == 3.0);
  CHECK(c.amplitude == 1.5);
}

TEST_CASE("validation heuristics") {
  ExperimentConfig c;
  c.amplitude = 3.0;
  c.topology.arm_a.dzeta = 0.01;
  auto report = validate(c);
  CHECK(report.ok());
  CHECK(mentions(report.warnings, "step size"));

  ExperimentConfig narrow;
  narrow.amplitude = 1.0;
  narrow.grid.window = 5.0;
  report = validate(narrow);
  CHECK_FALSE(report.ok());
  CHECK(mentions(report.errors, "clips"));

  ExperimentConfig bad_grid;
  bad_grid.grid.n_points = 100;
  CHECK_FALSE(validate(bad_grid).ok());

  ExperimentConfig few;
  few.n_traj = 100;
  CHECK(mentions(validate(few).warnings, "n_traj"));

  ExperimentConfig inconsistent;
  inconsistent.topology.arm_a.electronic_fraction = 0.81;  // no Raman model
  CHECK_FALSE(validate(inconsistent).ok());
}

TEST_CASE("config JSON round trip") {
  ExperimentConfig c;
  c.preset = Preset::fig2_scanN;
  c.mode = Representation::positive_p;
  c.n_traj = 1234;
  c.base_seed = 99;
  c.sweep.amplitudes = {1.0, 1.25};
  c.topology.arm_a = PhysicsParams::with_raman(1e9, 0.1e-12, 300.0, 0.1, 0.005);
  c.topology.phase_shift = 0.25;
  c.grid.window = 30.0;
  const auto text = config_to_json(c);
  const auto back = config_from_json(text);
  CHECK(config_to_json(back) == text);
  CHECK(back.preset == Preset::fig2_scanN);
  CHECK(back.n_traj == 1234);
  REQUIRE(back.topology.arm_a.raman.has_value());
  CHECK(back.topology.arm_a.raman->oscillators.size() == 1);
  CHECK(back.topology.arm_a.electronic_fraction == doctest::Approx(0.81));

  // Result metadata carries the config and is accepted as input.
  const std::string meta = R"({"version":"x","config":)" + text + "}";
  CHECK(config_to_json(config_from_json(meta)) == text);
}

TEST_CASE("config parse errors") {
  try {
    config_from_json("{\n  \"n_traj\": 10,\n  \"mode\": }");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(config_from_json(R"({"n_trajectories": 10})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"mode": "husimi"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"n_traj": "many"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"grid": {"points": 4}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("preset expansion") {
  ExperimentConfig c;
  c.preset = Preset::fig1_io;
  const auto series = io_series(c);
  REQUIRE(series.size() == 3);
  CHECK(series[0].split_ratio == 0.9);
  CHECK(series[0].zeta == doctest::Approx(kPi));
  CHECK(series[1].zeta == doctest::Approx(2 * kPi));
  CHECK(series[2].split_ratio == 0.6);
  CHECK(expand_scan_jobs(c).empty());

  c.preset = Preset::fig2_scanN;
  const auto scan = expand_scan_jobs(c);
  CHECK(scan.size() == 33);
  CHECK(scan.front().experiment.checkpoints == std::vector<double>{kPi / 2, kPi});

  c.preset = Preset::fig3_scanZ;
  const auto fig3 = expand_scan_jobs(c);
  REQUIRE(fig3.size() == 4);
  CHECK(fig3[0].label == "fig3_scanZ_free");
  CHECK(fig3[0].experiment.topology.arm_b.kind == ArmKind::free);
  CHECK(fig3[0].experiment.amplitude * fig3[0].experiment.amplitude == doctest::Approx(10.0 / 9.0));
  CHECK(fig3[0].experiment.checkpoints.back() == doctest::Approx(8 * kPi));
  CHECK(fig3[2].experiment.topology.arm_a.raman.has_value());
  CHECK(fig3[2].experiment.topology.arm_a.nbar == 1e9);
  CHECK(fig3[3].experiment.topology.arm_a.dispersion == Dispersion::normal);
  CHECK(fig3[3].experiment.amplitude == 3.0);
}

TEST_CASE("CSV formatting") {
  CHECK(std::stod(format_number(0.1)) == 0.1);
  CHECK(std::stod(format_number(kPi)) == kPi);
  IoCurve curve;
  curve.ratio = 0.9;
  curve.zeta = kPi;
  curve.points = {{0.5, 0.123456789012345678}, {1.0, 1.5}};
  const auto csv = io_csv({curve});
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  CHECK(header == kIoCsvHeader);
  std::getline(in, row);
  std::istringstream cells(row);
  std::string cell;
  std::vector<double> values;
  while (std::getline(cells, cell, ',')) values.push_back(std::stod(cell));
  REQUIRE(values.size() == 4);
  CHECK(values[1] == kPi);
  CHECK(values[3] == 0.123456789012345678);

  SqueezingResult r;
  r.zeta = 3.0;
  r.mean_photons = 1e8;
  r.variance_db = -11.0;
  r.std_error_db = 0.1;
  r.n_traj = 10;
  r.valid = true;
  CHECK(scan_csv_row(0.9, 1.5, r) == "0.90000000000000002,3,1.5,100000000,-11,0.10000000000000001,10,0\n");
}

TEST_CASE("run writes data and metadata") {
  ExperimentConfig c;
  c.preset = Preset::single;
  c.n_traj = 20;
  c.topology.zeta = 0.2;
  c.grid = GridSettings{128, 25.0};
  c.output = scratch_dir("single").string();
  std::ostringstream log;
  const auto report = run(c, log);
  CHECK(report.code == ExitCode::ok);
  const auto csv = slurp(std::filesystem::path(c.output) / "single.csv");
  CHECK(csv.rfind(std::string(kScanCsvHeader) + "\n", 0) == 0);
  const auto meta = slurp(std::filesystem::path(c.output) / "single.json");
  CHECK(meta.find("\"wall_time_s\"") != std::string::npos);
  // The metadata reproduces the run configuration.
  CHECK(config_to_json(config_from_json(meta)) == config_to_json(c));

  ExperimentConfig io;
  io.preset = Preset::fig1_io;
  io.sweep.amplitudes = {0.5, 1.0, 1.5};
  io.grid = GridSettings{128, 25.0};
  io.output = scratch_dir("io").string();
  CHECK(run(io, log).code == ExitCode::ok);
  CHECK(std::filesystem::exists(std::filesystem::path(io.output) / "fig1_io.csv"));

  ExperimentConfig broken;
  broken.grid.window = 5.0;
  broken.output = scratch_dir("broken").string();
  CHECK(run(broken, log).code == ExitCode::config_error);
}
