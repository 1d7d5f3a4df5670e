#include "sqz/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "sqz/error.hpp"

#ifndef SQZ_VERSION
#define SQZ_VERSION "0.0.0"
#endif

namespace sqz {

using nlohmann::json;

std::string_view version() { return SQZ_VERSION; }

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::single: return "single";
    case Preset::fig1_io: return "fig1_io";
    case Preset::fig2_scanN: return "fig2_scanN";
    case Preset::fig3_scanZ: return "fig3_scanZ";
  }
  return "unknown";
}

Preset preset_from_string(std::string_view name) {
  for (auto p : {Preset::single, Preset::fig1_io, Preset::fig2_scanN, Preset::fig3_scanZ})
    if (to_string(p) == name) return p;
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

TopologySpec ExperimentConfig::default_topology() {
  return TopologySpec::sagnac(0.9, 3.0, PhysicsParams::ideal(1e8, 0.004));
}

// ---------------------------------------------------------------------------
// JSON schema

namespace {

constexpr double kPi = std::numbers::pi;

void reject_unknown(const json& j, std::initializer_list<std::string_view> keys, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  std::set<std::string_view> allowed(keys);
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
}

template <typename T>
void read(const json& j, std::string_view key, T& out, std::string_view where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(std::string(key)).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + "." + std::string(key) + ": " + e.what());
  }
}

json scales_to_json(const PhysicalScales& s) {
  return {{"t0", s.t0}, {"k2_abs", s.k2_abs}, {"group_velocity", s.group_velocity}, {"chi", s.chi}};
}

PhysicalScales scales_from_json(const json& j) {
  reject_unknown(j, {"t0", "k2_abs", "group_velocity", "chi"}, "scales");
  PhysicalScales s;
  read(j, "t0", s.t0, "scales");
  read(j, "k2_abs", s.k2_abs, "scales");
  read(j, "group_velocity", s.group_velocity, "scales");
  read(j, "chi", s.chi, "scales");
  return s;
}

json raman_to_json(const RamanModel& m) {
  json oscillators = json::array();
  for (const auto& o : m.oscillators)
    oscillators.push_back({{"strength", o.strength}, {"center_frequency", o.center_frequency}, {"damping", o.damping}});
  return {{"fraction", m.fraction}, {"oscillators", oscillators}};
}

RamanModel raman_from_json(const json& j) {
  reject_unknown(j, {"fraction", "oscillators"}, "raman");
  RamanModel m;
  read(j, "fraction", m.fraction, "raman");
  if (j.contains("oscillators")) {
    for (const auto& o : j.at("oscillators")) {
      reject_unknown(o, {"strength", "center_frequency", "damping"}, "raman.oscillators[]");
      RamanOscillator osc;
      read(o, "strength", osc.strength, "raman.oscillators[]");
      read(o, "center_frequency", osc.center_frequency, "raman.oscillators[]");
      read(o, "damping", osc.damping, "raman.oscillators[]");
      m.oscillators.push_back(osc);
    }
  }
  return m;
}

json physics_to_json(const PhysicsParams& p) {
  return {{"dispersion", to_string(p.dispersion)},
          {"electronic_fraction", p.electronic_fraction},
          {"nbar", p.nbar},
          {"raman", p.raman ? raman_to_json(*p.raman) : json(nullptr)},
          {"temperature", p.temperature},
          {"loss_db_per_km", p.loss_db_per_km},
          {"scales", scales_to_json(p.scales)},
          {"dzeta", p.dzeta},
          {"nonlinear", p.nonlinear}};
}

PhysicsParams physics_from_json(const json& j, PhysicsParams p, std::string_view where) {
  reject_unknown(j, {"dispersion", "electronic_fraction", "nbar", "raman", "temperature", "loss_db_per_km",
                     "scales", "dzeta", "nonlinear"},
                 where);
  if (j.contains("dispersion")) p.dispersion = dispersion_from_string(j.at("dispersion").get<std::string>());
  read(j, "electronic_fraction", p.electronic_fraction, where);
  read(j, "nbar", p.nbar, where);
  if (j.contains("raman")) {
    if (j.at("raman").is_null()) {
      p.raman.reset();
    } else {
      p.raman = raman_from_json(j.at("raman"));
    }
  }
  read(j, "temperature", p.temperature, where);
  read(j, "loss_db_per_km", p.loss_db_per_km, where);
  if (j.contains("scales")) p.scales = scales_from_json(j.at("scales"));
  read(j, "dzeta", p.dzeta, where);
  read(j, "nonlinear", p.nonlinear, where);
  return p;
}

json topology_to_json(const TopologySpec& t) {
  return {{"split_ratio", t.split_ratio},
          {"recombine_ratio", t.recombine_ratio ? json(*t.recombine_ratio) : json(nullptr)},
          {"loop", t.loop},
          {"arm_a", physics_to_json(t.arm_a)},
          {"arm_b", {{"kind", to_string(t.arm_b.kind)}, {"physics", physics_to_json(t.arm_b.physics)}}},
          {"phase_shift", t.phase_shift},
          {"zeta", t.zeta}};
}

TopologySpec topology_from_json(const json& j, TopologySpec t) {
  reject_unknown(j, {"split_ratio", "recombine_ratio", "loop", "arm_a", "arm_b", "phase_shift", "zeta"}, "topology");
  read(j, "split_ratio", t.split_ratio, "topology");
  if (j.contains("recombine_ratio")) {
    if (j.at("recombine_ratio").is_null()) {
      t.recombine_ratio.reset();
    } else {
      t.recombine_ratio = j.at("recombine_ratio").get<double>();
    }
  }
  read(j, "loop", t.loop, "topology");
  if (j.contains("arm_a")) t.arm_a = physics_from_json(j.at("arm_a"), t.arm_a, "topology.arm_a");
  if (j.contains("arm_b")) {
    const auto& b = j.at("arm_b");
    reject_unknown(b, {"kind", "physics"}, "topology.arm_b");
    if (b.contains("kind")) t.arm_b.kind = arm_kind_from_string(b.at("kind").get<std::string>());
    if (b.contains("physics")) t.arm_b.physics = physics_from_json(b.at("physics"), t.arm_b.physics, "topology.arm_b.physics");
  }
  read(j, "phase_shift", t.phase_shift, "topology");
  read(j, "zeta", t.zeta, "topology");
  return t;
}

json config_to_json_value(const ExperimentConfig& c) {
  return {{"preset", to_string(c.preset)},
          {"topology", topology_to_json(c.topology)},
          {"mode", to_string(c.mode)},
          {"nbar", c.nbar},
          {"nbar_raman", c.nbar_raman},
          {"amplitude", c.amplitude},
          {"n_traj", c.n_traj},
          {"base_seed", c.base_seed},
          {"grid", {{"n_points", c.grid.n_points}, {"window", c.grid.window}}},
          {"sweep", {{"N", c.sweep.amplitudes}, {"zeta", c.sweep.zetas}}},
          {"output", c.output},
          {"workers", c.workers}};
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) { return config_to_json_value(config).dump(2); }

ExperimentConfig config_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc.contains("version")) doc = doc.at("config");

  reject_unknown(doc, {"preset", "topology", "mode", "nbar", "nbar_raman", "amplitude", "n_traj", "base_seed", "grid",
                       "sweep", "output", "workers"},
                 "config");
  ExperimentConfig c;
  try {
    if (doc.contains("preset")) c.preset = preset_from_string(doc.at("preset").get<std::string>());
    if (doc.contains("topology")) c.topology = topology_from_json(doc.at("topology"), c.topology);
    if (doc.contains("mode")) c.mode = representation_from_string(doc.at("mode").get<std::string>());
    read(doc, "nbar", c.nbar, "config");
    read(doc, "nbar_raman", c.nbar_raman, "config");
    read(doc, "amplitude", c.amplitude, "config");
    read(doc, "n_traj", c.n_traj, "config");
    read(doc, "base_seed", c.base_seed, "config");
    if (doc.contains("grid")) {
      const auto& g = doc.at("grid");
      reject_unknown(g, {"n_points", "window"}, "grid");
      read(g, "n_points", c.grid.n_points, "grid");
      read(g, "window", c.grid.window, "grid");
    }
    if (doc.contains("sweep")) {
      const auto& s = doc.at("sweep");
      reject_unknown(s, {"N", "zeta"}, "sweep");
      read(s, "N", c.sweep.amplitudes, "sweep");
      read(s, "zeta", c.sweep.zetas, "sweep");
    }
    read(doc, "output", c.output, "config");
    read(doc, "workers", c.workers, "config");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

// ---------------------------------------------------------------------------
// Presets

namespace {

std::vector<double> linspace_open(double stop, int count) {
  std::vector<double> out;
  for (int i = 1; i <= count; ++i) out.push_back(stop * static_cast<double>(i) / count);
  return out;
}

std::vector<double> arange(double start, double stop, double step) {
  std::vector<double> out;
  const auto count = static_cast<int>(std::floor((stop - start) / step + 1e-9));
  for (int i = 0; i <= count; ++i) out.push_back(start + step * i);
  return out;
}

PhysicsParams with_nbar(PhysicsParams p, double nbar) {
  p.nbar = nbar;
  return p;
}

// Arm physics copied from the config with the authoritative nbar.
TopologySpec configured_topology(const ExperimentConfig& c) {
  TopologySpec t = c.topology;
  t.arm_a = with_nbar(t.arm_a, c.nbar);
  t.arm_b.physics = with_nbar(t.arm_b.physics, c.nbar);
  return t;
}

double max_amplitude(const ExperimentConfig& c) {
  double n = c.amplitude;
  for (double a : c.sweep.amplitudes) n = std::max(n, a);
  return n;
}

}  // namespace

std::vector<TopologySpec> io_series(const ExperimentConfig& config) {
  const auto base = configured_topology(config);
  std::vector<TopologySpec> series;
  for (auto [ratio, zeta] : {std::pair{0.9, kPi}, std::pair{0.9, 2 * kPi}, std::pair{0.6, 2 * kPi}}) {
    auto t = TopologySpec::sagnac(ratio, zeta, base.arm_a);
    series.push_back(t);
  }
  return series;
}

std::vector<PresetJob> expand_scan_jobs(const ExperimentConfig& c) {
  const auto grid = make_grid(c.grid.n_points, c.grid.window);
  const auto topology = configured_topology(c);
  std::vector<PresetJob> jobs;
  switch (c.preset) {
    case Preset::fig1_io:
      break;
    case Preset::single: {
      Experiment e{grid, topology, c.mode, c.amplitude, {topology.zeta}};
      jobs.push_back({"single", e});
      break;
    }
    case Preset::fig2_scanN: {
      const auto zetas = c.sweep.zetas.empty() ? std::vector<double>{kPi / 2, kPi} : c.sweep.zetas;
      const auto amplitudes = c.sweep.amplitudes.empty() ? arange(0.8, 2.4, 0.05) : c.sweep.amplitudes;
      for (double n : amplitudes) {
        Experiment e{grid, topology, c.mode, n, zetas};
        e.topology.zeta = zetas.back();
        jobs.push_back({"fig2_scanN", e});
      }
      break;
    }
    case Preset::fig3_scanZ: {
      const auto loop_zetas = c.sweep.zetas.empty() ? linspace_open(2 * kPi, 24) : c.sweep.zetas;
      const double dzeta = topology.arm_a.dzeta;

      // Fundamental soliton in one arm, linear propagation in the other, over
      // 16 soliton periods; the dispersing weak pulse needs a wide window.
      {
        auto physics = PhysicsParams::ideal(c.nbar, 0.01);
        auto t = TopologySpec::free_arm(topology.split_ratio, 8 * kPi, physics);
        t.phase_shift = topology.phase_shift;
        Experiment e{make_grid(kFreeArmGrid.n_points, kFreeArmGrid.window), t, c.mode, std::sqrt(10.0 / 9.0),
                     linspace_open(8 * kPi, 16)};
        jobs.push_back({"fig3_scanZ_free", e});
      }
      {
        auto t = TopologySpec::sagnac(topology.split_ratio, loop_zetas.back(), PhysicsParams::ideal(c.nbar, dzeta));
        jobs.push_back({"fig3_scanZ_loop", Experiment{grid, t, c.mode, 1.5, loop_zetas}});
      }
      {
        auto physics = PhysicsParams::with_raman(c.nbar_raman, 0.1e-12, 300.0, 0.1, dzeta);
        auto t = TopologySpec::sagnac(topology.split_ratio, loop_zetas.back(), physics);
        jobs.push_back({"fig3_scanZ_raman", Experiment{grid, t, c.mode, 1.5, loop_zetas}});
      }
      {
        auto physics = PhysicsParams::ideal(c.nbar, std::min(dzeta, 0.01 / 9.0));
        physics.dispersion = Dispersion::normal;
        auto t = TopologySpec::sagnac(topology.split_ratio, loop_zetas.back(), physics);
        // The chirped pulse spreads over ~40 t0 by zeta = 2 pi.
        const auto wide = make_grid(c.grid.n_points, std::max(c.grid.window, kNormalDispersionWindow));
        jobs.push_back({"fig3_scanZ_normal", Experiment{wide, t, c.mode, 3.0, loop_zetas}});
      }
      break;
    }
  }
  return jobs;
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate(const ExperimentConfig& c) {
  ValidationReport report;
  auto error = [&](std::string msg) { report.errors.push_back(std::move(msg)); };
  auto warn = [&](std::string msg) { report.warnings.push_back(std::move(msg)); };

  try {
    make_grid(c.grid.n_points, c.grid.window);
  } catch (const ConfigError& e) {
    error(e.what());
    return report;
  }
  try {
    configured_topology(c).validate();
  } catch (const ConfigError& e) {
    error(e.what());
  }
  if (!(c.nbar > 0.0)) error("nbar must be positive");

  const double n_max = max_amplitude(c);
  // Pulse tails at the window edge (clipping/wrap-around).
  const double edge = 1.0 / std::cosh(0.5 * c.grid.window);
  if (edge > 1e-4)
    error("window " + format_number(c.grid.window) + " clips the pulse tails (edge amplitude " + format_number(edge) +
          " of peak)");
  // Input spectrum sech(pi w/2) at the Nyquist frequency, plus a nonlinear broadening allowance.
  const double nyquist = kPi * static_cast<double>(c.grid.n_points) / c.grid.window;
  const double spectral_edge = 1.0 / std::cosh(0.5 * kPi * nyquist);
  if (spectral_edge > 1e-4) error("grid too coarse: input spectrum not contained below the Nyquist frequency");
  if (nyquist < 10.0 * std::max(1.0, n_max * n_max))
    warn("Nyquist frequency " + format_number(nyquist) + " may not contain nonlinear spectral broadening for N=" +
         format_number(n_max) + "; check by doubling n_points");

  const double dzeta = c.topology.arm_a.dzeta;
  const double limit = 0.01 / std::max(1.0, n_max * n_max);
  if (dzeta > limit * (1.0 + 1e-12))
    warn("step size dzeta=" + format_number(dzeta) + " exceeds 0.01/N^2=" + format_number(limit) + " for N=" +
         format_number(n_max));

  if (c.preset != Preset::fig1_io && c.mode != Representation::classical && c.n_traj < 1000)
    warn("n_traj=" + std::to_string(c.n_traj) + " below 1000; standard errors will be large");
  if (c.preset != Preset::fig1_io && c.n_traj < 2) error("n_traj must be at least 2");
  if (c.amplitude < 0.0) error("amplitude must be >= 0");
  for (double z : c.sweep.zetas)
    if (!(z >= 0.0)) error("sweep zeta values must be >= 0");
  return report;
}

// ---------------------------------------------------------------------------
// Output

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string io_csv(const std::vector<IoCurve>& curves) {
  std::string out(kIoCsvHeader);
  out += '\n';
  for (const auto& curve : curves)
    for (const auto& p : curve.points)
      out += format_number(curve.ratio) + ',' + format_number(curve.zeta) + ',' + format_number(p.amplitude) + ',' +
             format_number(p.flux_scaled) + '\n';
  return out;
}

std::string scan_csv_row(double ratio, double amplitude, const SqueezingResult& r) {
  return format_number(ratio) + ',' + format_number(r.zeta) + ',' + format_number(amplitude) + ',' +
         format_number(r.mean_photons) + ',' + format_number(r.valid ? r.variance_db : std::nan("")) + ',' +
         format_number(r.valid ? r.std_error_db : std::nan("")) + ',' + std::to_string(r.n_traj) + ',' +
         std::to_string(r.diverged) + '\n';
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

RunReport run(const ExperimentConfig& config, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  const auto validation = validate(config);
  for (const auto& w : validation.warnings) log << "warning: " << w << '\n';
  if (!validation.ok()) {
    for (const auto& e : validation.errors) log << "error: " << e << '\n';
    report.code = ExitCode::config_error;
    return report;
  }

  const std::filesystem::path dir(config.output);
  std::filesystem::create_directories(dir);
  json results = json::array();
  bool invalid = false;

  if (config.preset == Preset::fig1_io) {
    const auto grid = make_grid(config.grid.n_points, config.grid.window);
    const auto amplitudes = config.sweep.amplitudes.empty() ? arange(0.0, 2.5, 0.01) : config.sweep.amplitudes;
    std::vector<IoCurve> curves;
    for (const auto& t : io_series(config)) {
      curves.push_back(io_curve(amplitudes, t, grid));
      const auto& c = curves.back();
      results.push_back({{"ratio", c.ratio}, {"zeta", c.zeta}, {"turning_points", c.turning_points}});
      log << "io curve ratio=" << c.ratio << " zeta=" << c.zeta << ": " << c.turning_points.size()
          << " turning points\n";
    }
    const auto path = dir / "fig1_io.csv";
    write_file(path, io_csv(curves));
    report.files.push_back(path);
  } else {
    std::map<std::string, std::string> csv;
    for (const auto& job : expand_scan_jobs(config)) {
      const auto stats = run_ensemble(job.experiment, config.n_traj, config.base_seed, config.workers);
      report.diverged += stats.diverged();
      auto& text = csv[job.label];
      if (text.empty()) text = std::string(kScanCsvHeader) + '\n';
      for (std::size_t i = 0; i < stats.checkpoint_count(); ++i) {
        const auto r = squeezing_db(stats, i);
        text += scan_csv_row(job.experiment.topology.split_ratio, job.experiment.amplitude, r);
        if (!r.valid) invalid = true;
        results.push_back({{"series", job.label},
                           {"N", job.experiment.amplitude},
                           {"zeta", r.zeta},
                           {"variance_db", r.valid ? json(r.variance_db) : json(nullptr)},
                           {"stderr_db", r.valid ? json(r.std_error_db) : json(nullptr)},
                           {"valid", r.valid},
                           {"diagnostic", r.diagnostic}});
      }
      log << job.label << " N=" << job.experiment.amplitude << " done (" << stats.n_traj() << " trajectories, "
          << stats.diverged() << " diverged)\n";
    }
    for (const auto& [label, text] : csv) {
      const auto path = dir / (label + ".csv");
      write_file(path, text);
      report.files.push_back(path);
    }
  }

  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json meta = {{"version", version()},
               {"config", config_to_json_value(config)},
               {"base_seed", config.base_seed},
               {"diverged", report.diverged},
               {"wall_time_s", report.wall_seconds},
               {"warnings", validation.warnings},
               {"results", results}};
  const auto meta_path = dir / (std::string(to_string(config.preset)) + ".json");
  write_file(meta_path, meta.dump(2));
  report.files.push_back(meta_path);
  report.code = invalid ? ExitCode::invalid_result : ExitCode::ok;
  return report;
}

}  // namespace sqz
