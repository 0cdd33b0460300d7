#include "trustcons/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "trustcons/bounds.hpp"
#include "trustcons/config.hpp"
#include "trustcons/format.hpp"
#include "trustcons/harness.hpp"
#include "trustcons/spectral.hpp"

namespace trustcons {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<long> t0;
  std::optional<double> delta;
  std::string out;
  std::string format = "csv";
  unsigned jobs = 1;
  long t_max = 500;
  long step = 1;
  bool traces = false;
};

json load_document(const Options& o) {
  if (!o.config.empty() && !fs::exists(o.config)) throw ConfigError("config", "file not found: " + o.config);
  json doc = o.config.empty() ? json::object() : read_json(o.config);
  if (!doc.is_object()) throw ConfigError("", "scenario must be a JSON object");
  if (o.seed) doc["seed"] = *o.seed;
  if (o.trials) doc["trials"] = *o.trials;
  if (o.t0) doc["T0"] = *o.t0;
  if (o.delta) doc["delta"] = *o.delta;
  return doc;
}

ScenarioFile load(const Options& o) {
  const json doc = load_document(o);
  if (o.config.empty()) return parse_scenario(doc);
  try {
    return parse_scenario(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(e.key(), std::string(e.what()) + " (in " + o.config + ")");
  }
}

fs::path output_dir(const Options& o, const std::string& from_config) {
  fs::path dir;
  if (!o.out.empty()) {
    dir = o.out;
  } else if (!from_config.empty()) {
    dir = from_config;
  } else if (const char* env = std::getenv("TRUSTCONS_OUT_DIR"); env && *env) {
    dir = env;
  } else {
    dir = "out";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

json summary_json(const std::vector<ScenarioResult>& results) {
  json rows = json::array();
  auto real = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  for (const auto& r : results) {
    for (const auto& row : r.rows) {
      rows.push_back({{"attack", row.attack},
                      {"n_malicious", row.n_malicious},
                      {"ell", real(row.ell)},
                      {"T0", row.T0},
                      {"t", row.t},
                      {"mean_max_abs_dev", real(row.mean_max_abs_dev)},
                      {"std_max_abs_dev", real(row.std_max_abs_dev)},
                      {"mean_settling_step", real(row.mean_settling_step)},
                      {"delta_max", real(row.delta_max)},
                      {"violation_fraction", real(row.violation_fraction)}});
    }
  }
  return rows;
}

fs::path write_summary(const fs::path& dir, const std::vector<ScenarioResult>& results, const std::string& format) {
  if (format == "json") {
    const fs::path path = dir / "summary.json";
    auto out = open_output(path);
    out << summary_json(results).dump(2) << '\n';
    finish(out, path);
    return path;
  }
  const fs::path path = dir / "summary.csv";
  auto out = open_output(path);
  write_summary_csv(out, results);
  finish(out, path);
  return path;
}

int cmd_simulate(const Options& o, std::ostream& log) {
  ScenarioFile file = load(o);
  const fs::path dir = output_dir(o, file.scenario.out_dir);
  RunOptions run;
  run.jobs = o.jobs;
  const bool single = file.scenario.trials == 1;
  std::mutex io;
  std::optional<IoError> trace_failure;
  if (single || o.traces) {
    run.on_trace = [&](std::size_t k, const SimulationTrace& trace) {
      const std::string suffix = single ? "" : "_" + std::to_string(k);
      const fs::path trace_path = dir / ("trace" + suffix + ".csv");
      const fs::path summary_path = dir / ("trace_summary" + suffix + ".csv");
      std::ofstream t(trace_path), s(summary_path);
      write_trace_csv(t, trace);
      write_trace_summary_csv(s, trace);
      if (!t || !s) {
        std::lock_guard lock(io);
        trace_failure.emplace("failed writing " + trace_path.string());
      }
    };
  }
  const ScenarioResult result = run_monte_carlo(file.scenario, run);
  if (trace_failure) throw *trace_failure;
  const fs::path summary = write_summary(dir, {result}, o.format);
  write_manifest(dir / "manifest.json", file.effective, file.scenario.config.seed);
  log << "nominal " << format_real(result.nominal) << "\n"
      << "mean final deviation " << format_real(result.terminal_mean()) << "\n"
      << "delta_max " << format_real(result.delta_max) << " violation fraction "
      << format_real(result.violation_fraction) << "\n"
      << "wrote " << summary.string() << "\n";
  return kExitOk;
}

int run_sweep(const ScenarioFile& file, const Options& o, std::ostream& log) {
  if (!file.sweep) throw ConfigError("sweep", "missing sweep block");
  const fs::path dir = output_dir(o, file.scenario.out_dir);
  RunOptions run;
  run.jobs = o.jobs;
  const auto results = sweep(*file.sweep, run);
  const fs::path summary = write_summary(dir, results, o.format);
  write_manifest(dir / "manifest.json", file.effective, file.scenario.config.seed);
  log << "ran " << results.size() << " cells, wrote " << summary.string() << "\n";
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& log) { return run_sweep(load(o), o, log); }

void write_bounds(const fs::path& dir, const ScenarioFile& file, long t_max, long step, const std::string& format) {
  const SimulationConfig& cfg = file.scenario.config;
  const auto params = bounds::make_params(cfg.trust, cfg.topology.n_legit(), cfg.topology.n_malicious(), cfg.eta,
                                          cfg.kappa, file.scenario.delta, cfg.T0);
  const auto perron = spectral::analyze(cfg.topology, cfg.kappa);
  const auto report = bounds::evaluate(params, perron.rho2, t_max, step);
  if (format == "json") {
    json rows = json::array();
    auto real = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    for (const auto& r : report.rows) {
      rows.push_back({{"t_or_T0", r.index},
                      {"hoeffding_legit", real(r.hoeffding_legit)},
                      {"hoeffding_malicious", real(r.hoeffding_malicious)},
                      {"bennett_legit", real(r.bennett_legit)},
                      {"bennett_malicious", real(r.bennett_malicious)},
                      {"prob_not_ideal", real(r.prob_not_ideal)},
                      {"g_legit", real(r.g_legit)},
                      {"g_malicious", real(r.g_malicious)},
                      {"delta_max", real(r.delta_max)},
                      {"rate_bound", real(r.rate_bound)},
                      {"expected_rate_bound", real(r.expected_rate_bound)}});
    }
    const fs::path path = dir / "bounds.json";
    auto out = open_output(path);
    out << json{{"rho2", report.rho2}, {"rows", rows}}.dump(2) << '\n';
    finish(out, path);
    return;
  }
  const fs::path path = dir / "bounds.csv";
  auto out = open_output(path);
  bounds::write_bounds_csv(out, report);
  finish(out, path);
}

int cmd_bounds(const Options& o, std::ostream& log) {
  if (o.t_max < 0) throw ConfigError("t-max", "must be non-negative");
  if (o.step < 1) throw ConfigError("step", "must be positive");
  const ScenarioFile file = load(o);
  const fs::path dir = output_dir(o, file.scenario.out_dir);
  write_bounds(dir, file, o.t_max, o.step, o.format);
  log << "wrote bounds for t_or_T0 in [0, " << o.t_max << "] to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_spectral(const Options& o, std::ostream& log) {
  const ScenarioFile file = load(o);
  const SimulationConfig& cfg = file.scenario.config;
  const auto ideal = build_ideal(cfg.topology, cfg.kappa);
  const auto perron = spectral::perron_vector(ideal, cfg.topology, cfg.kappa);
  const bool primitive = spectral::is_primitive(ideal);
  const double rho = perron.valid ? spectral::rho2(ideal, perron.v) : 1.0;
  const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(cfg.x_legit_init.data(),
                                                               static_cast<Eigen::Index>(cfg.x_legit_init.size()));
  const double nominal = spectral::nominal_value(perron.v, x0);
  if (o.format == "json") {
    json j;
    j["v"] = std::vector<double>(perron.v.data(), perron.v.data() + perron.v.size());
    j["rho2"] = rho;
    j["connected"] = perron.valid;
    j["primitive"] = primitive;
    j["nominal"] = nominal;
    log << j.dump(2) << "\n";
    return kExitOk;
  }
  log << "connected " << (perron.valid ? "yes" : "no") << "\nprimitive " << (primitive ? "yes" : "no")
      << "\nrho2 " << format_real(rho) << "\nnominal " << format_real(nominal) << "\nv";
  for (Eigen::Index i = 0; i < perron.v.size(); ++i) log << ' ' << format_real(perron.v(i));
  log << "\n";
  return kExitOk;
}

json paper_repro_document(const Options& o) {
  json doc = {{"topology", "paper"},
              {"n_malicious", 15},
              {"alpha_width", 0.4},
              {"trials", o.trials.value_or(100)},
              {"seed", o.seed.value_or(0)},
              {"horizon", 500},
              {"sweep",
               {{"T0", {0, 25, 50, 100, 150}},
                {"n_malicious", {5, 15, 30}},
                {"ell", {0.2, 0.4, 0.6}},
                {"attack", {"max_deviation", "drift"}}}}};
  return doc;
}

int cmd_paper_repro(const Options& o, std::ostream& log) {
  const ScenarioFile file = parse_scenario(paper_repro_document(o));
  run_sweep(file, o, log);
  const fs::path dir = output_dir(o, "");
  write_bounds(dir, file, o.t_max, o.step, o.format);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) { return run_cli(argc, argv, std::cout, std::cerr); }

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trust-weighted resilient consensus simulator"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool with_config) {
    if (with_config) sub->add_option("--config", o.config, "JSON scenario file (default: reference scenario)");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--out", o.out, "Output directory (default: $TRUSTCONS_OUT_DIR or ./out)");
    sub->add_option("--trials", o.trials, "Monte Carlo trials");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "Run Monte Carlo trials of one scenario");
  add_common(simulate, true);
  simulate->add_option("--t0", o.t0, "Observation window length");
  simulate->add_option("--delta", o.delta, "Error probability of the deviation bound");
  simulate->add_flag("--traces", o.traces, "Write per-trial trace files");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run the grid in the config's sweep block");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--delta", o.delta, "Error probability of the deviation bound");

  auto* bounds_cmd = app.add_subcommand("bounds", "Tabulate the analytic bounds");
  bounds_cmd->add_option("--config", o.config, "JSON scenario file");
  bounds_cmd->add_option("--out", o.out, "Output directory");
  bounds_cmd->add_option("--t0", o.t0, "Observation window length for the rate columns");
  bounds_cmd->add_option("--delta", o.delta, "Error probability of the deviation bound");
  bounds_cmd->add_option("--t-max", o.t_max, "Largest t / T0 tabulated");
  bounds_cmd->add_option("--step", o.step, "Index spacing");
  bounds_cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto* spectral_cmd = app.add_subcommand("spectral", "Print v, rho2 and primitivity of the ideal matrix");
  spectral_cmd->add_option("--config", o.config, "JSON scenario file");
  spectral_cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto* repro = app.add_subcommand("paper-repro", "Run the reference grid and bound tables");
  add_common(repro, false);
  repro->add_option("--t-max", o.t_max, "Largest t / T0 in the bound table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(o, out);
    if (*sweep_cmd) return cmd_sweep(o, out);
    if (*bounds_cmd) return cmd_bounds(o, out);
    if (*spectral_cmd) return cmd_spectral(o, out);
    if (*repro) return cmd_paper_repro(o, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace trustcons
