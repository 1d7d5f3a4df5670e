#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "sqz/error.hpp"
#include "sqz/experiment.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> preset;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> n_traj;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> output;
  std::optional<double> amplitude;
  std::optional<double> zeta;
  std::optional<double> ratio;
  std::optional<double> dzeta;
  std::optional<std::size_t> n_points;
  std::optional<double> window;
};

void add_options(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config_path, "JSON config (or result metadata) file")->check(CLI::ExistingFile);
  app->add_option("-p,--preset", o.preset, "single | fig1_io | fig2_scanN | fig3_scanZ");
  app->add_option("-m,--mode", o.mode, "classical | wigner | positive_p");
  app->add_option("-n,--n-traj", o.n_traj, "number of trajectories");
  app->add_option("-s,--seed", o.seed, "base seed");
  app->add_option("-j,--workers", o.workers, "worker threads");
  app->add_option("-o,--output", o.output, "output directory");
  app->add_option("-N,--amplitude", o.amplitude, "soliton order N of the input");
  app->add_option("-z,--zeta", o.zeta, "propagation distance in soliton units");
  app->add_option("-r,--ratio", o.ratio, "input split ratio");
  app->add_option("--dzeta", o.dzeta, "step size");
  app->add_option("--n-points", o.n_points, "grid points (power of two)");
  app->add_option("--window", o.window, "time window in units of t0");
}

sqz::ExperimentConfig build_config(const Overrides& o) {
  sqz::ExperimentConfig c = o.config_path.empty() ? sqz::ExperimentConfig{} : sqz::load_config(o.config_path);
  if (o.preset) c.preset = sqz::preset_from_string(*o.preset);
  if (o.mode) c.mode = sqz::representation_from_string(*o.mode);
  if (o.n_traj) c.n_traj = *o.n_traj;
  if (o.seed) c.base_seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.output) c.output = *o.output;
  if (o.amplitude) c.amplitude = *o.amplitude;
  if (o.zeta) c.topology.zeta = *o.zeta;
  if (o.ratio) c.topology.split_ratio = *o.ratio;
  if (o.dzeta) {
    c.topology.arm_a.dzeta = *o.dzeta;
    c.topology.arm_b.physics.dzeta = *o.dzeta;
  }
  if (o.n_points) c.grid.n_points = *o.n_points;
  if (o.window) c.grid.window = *o.window;
  return c;
}

int print_validation(const sqz::ValidationReport& report) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& e : report.errors) std::cerr << "error: " << e << '\n';
  if (report.empty()) std::cout << "config OK\n";
  return report.ok() ? 0 : static_cast<int>(sqz::ExitCode::config_error);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soliton squeezing in fibre interferometers"};
  app.set_version_flag("--version", std::string(sqz::version()));
  app.require_subcommand(1);

  Overrides run_opts;
  auto* run_cmd = app.add_subcommand("run", "run a preset and write CSV + JSON metadata");
  add_options(run_cmd, run_opts);

  Overrides validate_opts;
  auto* validate_cmd = app.add_subcommand("validate", "check a config without running it");
  add_options(validate_cmd, validate_opts);

  Overrides show_opts;
  auto* show_cmd = app.add_subcommand("show-config", "print the effective config as JSON");
  add_options(show_cmd, show_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const auto config = build_config(run_opts);
      const auto report = sqz::run(config, std::cerr);
      for (const auto& f : report.files) std::cout << f.string() << '\n';
      if (report.code == sqz::ExitCode::invalid_result)
        std::cerr << "error: result invalid (diverged trajectories above threshold)\n";
      return static_cast<int>(report.code);
    }
    if (*validate_cmd) return print_validation(sqz::validate(build_config(validate_opts)));
    if (*show_cmd) {
      std::cout << sqz::config_to_json(build_config(show_opts)) << '\n';
      return 0;
    }
  } catch (const sqz::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return static_cast<int>(sqz::ExitCode::config_error);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(sqz::ExitCode::failure);
  }
  return 0;
}
