// Command-line front end: solve / scan / sweep / bifurcation.
//
// Option values resolve in three layers: built-in defaults, then a
// `--config key=value` file, then command-line flags. Progress goes to
// stderr; stdout carries only reports and (without --out) CSV data.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aim/csv.hpp"
#include "aim/dynamics.hpp"
#include "aim/metrics.hpp"
#include "aim/problem.hpp"
#include "aim/scan.hpp"

namespace {

using ConfigMap = std::map<std::string, std::string>;

const std::set<std::string> kConfigKeys = {
    "problem",    "optima",     "alpha",       "beta",       "gamma",
    "h",          "iterations", "runs",        "seed",       "workers",
    "out",        "mode",       "trace",       "alpha-min",  "alpha-max",
    "beta-min",   "beta-max",   "alpha-steps", "beta-steps", "samples",
    "floor",      "init",       "values"};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

ConfigMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  ConfigMap cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    if (!kConfigKeys.count(key))
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    cfg[key] = trim(t.substr(eq + 1));
  }
  return cfg;
}

template <typename T>
T cfg_or(const ConfigMap& cfg, const std::string& key, T builtin) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return builtin;
  std::istringstream in(it->second);
  T value{};
  if constexpr (std::is_same_v<T, std::string>) {
    return it->second;
  } else {
    if (!(in >> value) || !in.eof())
      throw std::invalid_argument("config key '" + key + "': bad value '" +
                                  it->second + "'");
    return value;
  }
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::istringstream vs(item);
    double v = 0.0;
    if (!(vs >> v) || !vs.eof())
      throw std::invalid_argument("bad value '" + item + "' in value list");
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// option bundles

struct SimOpts {
  double alpha = 0.9;
  double beta = 0.1;
  double gamma = 0.01;
  double h = 1.0;
  long iterations = 5000;
  std::uint64_t seed = 1;
  std::string mode = "amplitude";

  aim::SimParams to_params() const {
    aim::SimParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.h = h;
    p.iterations = iterations;
    p.seed = seed;
    p.feedback_mode = mode == "spinsign" ? aim::FeedbackMode::kSpinSign
                                         : aim::FeedbackMode::kAmplitude;
    return p;
  }
};

struct GridOpts {
  double alpha_min = 0.5;
  double alpha_max = 1.0;
  double beta_min = 0.0;
  double beta_max = 0.5;
  int alpha_steps = 21;
  int beta_steps = 21;
  int runs = 250;
};

void add_config_option(CLI::App* cmd, std::string& path) {
  cmd->add_option("--config", path,
                  "Flat key=value config file; flags override file values");
}

void add_sim_options(CLI::App* cmd, SimOpts& o, const ConfigMap& cfg) {
  cmd->add_option("--alpha", o.alpha, "Gain")
      ->default_val(cfg_or(cfg, "alpha", o.alpha));
  cmd->add_option("--beta", o.beta, "Coupling strength")
      ->default_val(cfg_or(cfg, "beta", o.beta));
  cmd->add_option("--gamma", o.gamma, "Noise amplitude")
      ->default_val(cfg_or(cfg, "gamma", o.gamma));
  cmd->add_option("--h", o.h, "Euler step in (0, 1]")
      ->default_val(cfg_or(cfg, "h", o.h));
  cmd->add_option("--iterations", o.iterations, "Iterations per run")
      ->default_val(cfg_or(cfg, "iterations", o.iterations));
  cmd->add_option("--seed", o.seed, "Master seed")
      ->default_val(cfg_or(cfg, "seed", o.seed));
  cmd->add_option("--mode", o.mode, "Feedback mode: amplitude or spinsign")
      ->default_val(cfg_or<std::string>(cfg, "mode", o.mode))
      ->check(CLI::IsMember({"amplitude", "spinsign"}));
}

void add_grid_options(CLI::App* cmd, GridOpts& o, const ConfigMap& cfg) {
  cmd->add_option("--alpha-min", o.alpha_min, "Grid lower alpha bound")
      ->default_val(cfg_or(cfg, "alpha-min", o.alpha_min));
  cmd->add_option("--alpha-max", o.alpha_max, "Grid upper alpha bound")
      ->default_val(cfg_or(cfg, "alpha-max", o.alpha_max));
  cmd->add_option("--beta-min", o.beta_min, "Grid lower beta bound")
      ->default_val(cfg_or(cfg, "beta-min", o.beta_min));
  cmd->add_option("--beta-max", o.beta_max, "Grid upper beta bound")
      ->default_val(cfg_or(cfg, "beta-max", o.beta_max));
  cmd->add_option("--alpha-steps", o.alpha_steps, "Grid points on the alpha axis")
      ->default_val(cfg_or(cfg, "alpha-steps", o.alpha_steps));
  cmd->add_option("--beta-steps", o.beta_steps, "Grid points on the beta axis")
      ->default_val(cfg_or(cfg, "beta-steps", o.beta_steps));
  cmd->add_option("--runs", o.runs, "Runs per grid cell")
      ->default_val(cfg_or(cfg, "runs", o.runs));
}

// ---------------------------------------------------------------------------
// shared plumbing

aim::IsingProblem load_problem(const std::string& problem_path,
                               const std::string& optima_path,
                               bool target_required) {
  aim::MaxCutInstance instance = aim::load_maxcut_file(problem_path);
  aim::IsingProblem ising = aim::maxcut_to_ising(instance);
  if (!optima_path.empty()) {
    const auto optima = aim::load_optima_file(optima_path);
    const auto it = optima.find(ising.name());
    if (it == optima.end())
      throw std::invalid_argument("no optimum recorded for '" + ising.name() +
                                  "' in " + optima_path);
    ising.set_known_optimum(aim::target_energy_from_cut(ising, it->second));
  } else if (target_required) {
    throw std::invalid_argument("--optima is required for this command");
  }
  return ising;
}

void write_output(const std::string& out_path, const std::string& csv,
                  const std::string& report) {
  if (out_path.empty()) {
    std::cout << csv;
    std::cerr << report;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << csv;
    std::cout << report;
  }
}

aim::ProgressFn stderr_progress(const std::string& label) {
  auto mutex = std::make_shared<std::mutex>();
  return [label, mutex](int done, int total) {
    const int stride = std::max(1, total / 20);
    if (done % stride != 0 && done != total) return;
    std::lock_guard<std::mutex> lock(*mutex);
    std::cerr << label << " " << done << "/" << total << "\n";
  };
}

std::string fmt(double v) { return aim::format_number(v); }

// ---------------------------------------------------------------------------
// commands

int cmd_solve(const std::string& problem_path, const std::string& optima_path,
              const SimOpts& sim, const std::string& trace_path) {
  aim::IsingProblem ising = load_problem(problem_path, optima_path, false);
  const aim::SimParams params = sim.to_params();
  params.validate();

  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path, std::ios::binary);
    if (!trace) throw std::runtime_error("cannot write '" + trace_path + "'");
    trace << "iteration,energy";
    for (int i = 0; i < ising.size(); ++i) trace << ",x" << i;
    trace << "\n";
  }

  aim::RunRecord rec;
  if (trace.is_open()) {
    rec = aim::run(ising, params,
                   [&](long k, std::span<const double> x, double energy) {
                     trace << k << ',' << fmt(energy);
                     for (double v : x) trace << ',' << fmt(v);
                     trace << '\n';
                   });
  } else {
    rec = aim::run(ising, params);
  }

  const double half_jsum = 0.5 * ising.coupling_sum();
  std::cout << "problem " << ising.name() << "\n";
  std::cout << "n " << ising.size() << "\n";
  if (ising.known_optimum())
    std::cout << "target_energy " << fmt(*ising.known_optimum()) << "\n";
  std::cout << "best_energy " << fmt(rec.best_energy) << "\n";
  std::cout << "best_cut " << fmt((-rec.best_energy - half_jsum) / 2.0) << "\n";
  if (ising.known_optimum())
    std::cout << "success " << (rec.success ? "true" : "false") << "\n";
  else
    std::cout << "success unknown\n";
  std::cout << "first_success_iteration "
            << (rec.first_success_iteration
                    ? std::to_string(*rec.first_success_iteration)
                    : std::string("none"))
            << "\n";
  return 0;
}

aim::GridSpec make_grid(const GridOpts& grid, const SimOpts& sim) {
  aim::GridSpec spec;
  spec.alpha_min = grid.alpha_min;
  spec.alpha_max = grid.alpha_max;
  spec.beta_min = grid.beta_min;
  spec.beta_max = grid.beta_max;
  spec.alpha_steps = grid.alpha_steps;
  spec.beta_steps = grid.beta_steps;
  spec.runs_per_cell = grid.runs;
  spec.base = sim.to_params();
  return spec;
}

std::string grid_report_tail(const aim::GridSpec& g) {
  std::string r;
  r += "alpha_min " + fmt(g.alpha_min) + "\nalpha_max " + fmt(g.alpha_max) + "\n";
  r += "beta_min " + fmt(g.beta_min) + "\nbeta_max " + fmt(g.beta_max) + "\n";
  r += "alpha_steps " + std::to_string(g.alpha_steps) + "\nbeta_steps " +
       std::to_string(g.beta_steps) + "\n";
  r += "runs " + std::to_string(g.runs_per_cell) + "\n";
  r += "h " + fmt(g.base.h) + "\ngamma " + fmt(g.base.gamma) + "\n";
  r += "iterations " + std::to_string(g.base.iterations) + "\n";
  return r;
}

int cmd_scan(const std::string& problem_path, const std::string& optima_path,
             const GridOpts& grid, const SimOpts& sim, int workers,
             const std::string& out_path) {
  const aim::IsingProblem ising = load_problem(problem_path, optima_path, true);
  const aim::GridSpec spec = make_grid(grid, sim);
  const aim::ScanResult scan =
      aim::grid_scan(ising, spec, sim.seed, workers, stderr_progress("cells"));
  const aim::AooResult area = aim::aoo(scan);

  std::string report = "problem " + ising.name() + "\n";
  report += "aoo_percent " + fmt(area.percent) + "\n";
  report += "nonzero_cells " + std::to_string(area.nonzero_cells) + "\n";
  report += "total_cells " + std::to_string(area.total_cells) + "\n";
  report += grid_report_tail(spec);
  write_output(out_path, aim::scan_csv(scan), report);
  return 0;
}

int cmd_sweep(const std::string& kind, std::vector<double> values,
              const std::string& problem_path, const std::string& optima_path,
              const GridOpts& grid, const SimOpts& sim, int workers,
              const std::string& out_path, const ConfigMap& cfg) {
  if (values.empty() && cfg.count("values")) {
    values = parse_value_list(cfg.at("values"));
    if (values.empty())
      throw std::invalid_argument("empty value list in config");
  }
  if (values.empty()) {
    if (kind == "h") values = {0.01, 0.05, 0.1, 0.25, 0.5, 1.0};
    else if (kind == "noise") values = {0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0};
    else values = {100, 500, 1000, 2000, 5000, 10000};
  }

  const aim::IsingProblem ising = load_problem(problem_path, optima_path, true);
  const aim::GridSpec spec = make_grid(grid, sim);

  aim::SweepTable table;
  if (kind == "h") {
    table = aim::h_sweep(ising, spec, values, sim.seed, workers,
                         stderr_progress("cells"));
  } else if (kind == "noise") {
    table = aim::noise_sweep(ising, spec, values, sim.seed, workers,
                             stderr_progress("cells"));
  } else {
    std::vector<long> iters;
    for (double v : values) {
      const long n = std::lround(v);
      if (n < 1 || static_cast<double>(n) != v)
        throw std::invalid_argument("runtime sweep values must be positive integers");
      iters.push_back(n);
    }
    table = aim::runtime_sweep(ising, spec, iters, sim.seed, workers,
                               stderr_progress("cells"));
  }

  std::string report = "problem " + ising.name() + "\n";
  report += "sweep " + table.parameter + "\n";
  for (const aim::SweepEntry& e : table.entries)
    report += table.parameter + " " + fmt(e.value) + " aoo_percent " +
              fmt(e.aoo.percent) + "\n";
  report += grid_report_tail(spec);
  write_output(out_path, aim::sweep_csv(table), report);
  return 0;
}

int cmd_bifurcation(double alpha_min, double alpha_max, int alpha_steps,
                    int samples, const SimOpts& sim, double floor,
                    double init_amplitude, int workers,
                    const std::string& out_path) {
  aim::BifurcationSpec spec;
  spec.alpha_min = alpha_min;
  spec.alpha_max = alpha_max;
  spec.alpha_steps = alpha_steps;
  spec.samples_per_alpha = samples;
  spec.params = sim.to_params();
  spec.params.alpha = 0.0;
  spec.params.beta = 0.0;  // forced: gain scan runs without coupling
  spec.detection_floor = floor;
  spec.init_amplitude = init_amplitude;

  const aim::BifurcationScan scan = aim::bifurcation_scan(spec, workers);

  std::string report;
  report += "detected_threshold ";
  report += scan.detected_threshold ? fmt(*scan.detected_threshold)
                                    : std::string("none");
  report += "\n";
  report += "detection_floor " + fmt(scan.floor_used) + "\n";
  report += "alpha_min " + fmt(alpha_min) + "\nalpha_max " + fmt(alpha_max) +
            "\nalpha_steps " + std::to_string(alpha_steps) + "\n";
  report += "samples " + std::to_string(samples) + "\n";
  write_output(out_path, aim::bifurcation_csv(scan), report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // the config file participates in defaults, so it is read before parsing
  ConfigMap cfg;
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        cfg = load_config(argv[i + 1]);
      } else if (arg.rfind("--config=", 0) == 0) {
        cfg = load_config(arg.substr(9));
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: args: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"Analog Ising machine simulator and benchmark harness"};
  app.require_subcommand(1);
  // --h is a real option (the Euler step), so help keeps only its long form
  app.set_help_flag("--help", "Print help and exit");
  std::string config_path;
  app.add_option("--config", config_path,
                 "Flat key=value config file; flags override file values");

  std::string problem_path = cfg_or<std::string>(cfg, "problem", "");
  std::string optima_path = cfg_or<std::string>(cfg, "optima", "");
  std::string out_path = cfg_or<std::string>(cfg, "out", "");
  std::string trace_path = cfg_or<std::string>(cfg, "trace", "");
  int workers = cfg_or(cfg, "workers", 0);

  SimOpts sim;
  GridOpts grid;

  // solve ------------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "Run once and report the outcome");
  solve->set_help_flag("--help", "Print help and exit");
  add_config_option(solve, config_path);
  solve->add_option("--problem", problem_path, "Instance file (edge list)")
      ->required(cfg.find("problem") == cfg.end());
  solve->add_option("--optima", optima_path,
                    "Best-known-cut metadata file (enables success evaluation)");
  add_sim_options(solve, sim, cfg);
  solve->add_option("--trace", trace_path,
                    "Write a per-iteration energy/amplitude CSV");
  solve->add_option("--workers", workers, "Unused for solve; accepted for symmetry");

  // scan -------------------------------------------------------------------
  auto* scan = app.add_subcommand("scan", "Brute-force (alpha, beta) grid scan");
  scan->set_help_flag("--help", "Print help and exit");
  add_config_option(scan, config_path);
  scan->add_option("--problem", problem_path, "Instance file (edge list)")
      ->required(cfg.find("problem") == cfg.end());
  scan->add_option("--optima", optima_path, "Best-known-cut metadata file")
      ->required(cfg.find("optima") == cfg.end());
  add_sim_options(scan, sim, cfg);
  add_grid_options(scan, grid, cfg);
  scan->add_option("--workers", workers, "Parallel workers (0 = hardware)")
      ->default_val(cfg_or(cfg, "workers", 0));
  scan->add_option("--out", out_path, "CSV output path (default: stdout)");

  // sweep ------------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sweep", "Repeat the grid scan while sweeping h, noise or runtime");
  sweep->set_help_flag("--help", "Print help and exit");
  add_config_option(sweep, config_path);
  std::string sweep_kind;
  std::vector<double> sweep_values;
  sweep->add_option("kind", sweep_kind, "One of: h, noise, runtime")
      ->required()
      ->check(CLI::IsMember({"h", "noise", "runtime"}));
  sweep->add_option("--values", sweep_values,
                    "Swept values, comma separated (defaults depend on the kind)")
      ->delimiter(',');
  sweep->add_option("--problem", problem_path, "Instance file (edge list)")
      ->required(cfg.find("problem") == cfg.end());
  sweep->add_option("--optima", optima_path, "Best-known-cut metadata file")
      ->required(cfg.find("optima") == cfg.end());
  add_sim_options(sweep, sim, cfg);
  add_grid_options(sweep, grid, cfg);
  sweep->add_option("--workers", workers, "Parallel workers (0 = hardware)")
      ->default_val(cfg_or(cfg, "workers", 0));
  sweep->add_option("--out", out_path, "CSV output path (default: stdout)");

  // bifurcation --------------------------------------------------------------
  auto* bif = app.add_subcommand(
      "bifurcation", "Uncoupled-spin gain scan locating the pitchfork threshold");
  bif->set_help_flag("--help", "Print help and exit");
  add_config_option(bif, config_path);
  double b_alpha_min = cfg_or(cfg, "alpha-min", 0.5);
  double b_alpha_max = cfg_or(cfg, "alpha-max", 1.5);
  int b_alpha_steps = cfg_or(cfg, "alpha-steps", 21);
  int b_samples = cfg_or(cfg, "samples", 80);
  double b_floor = cfg_or(cfg, "floor", 0.0);
  double b_init = cfg_or(cfg, "init", 0.0);
  SimOpts bif_sim;
  bif_sim.gamma = 0.001;
  bif_sim.h = 0.01;
  bif_sim.iterations = 500;
  bif->add_option("--alpha-min", b_alpha_min, "Scan lower gain bound")
      ->default_val(b_alpha_min);
  bif->add_option("--alpha-max", b_alpha_max, "Scan upper gain bound")
      ->default_val(b_alpha_max);
  bif->add_option("--alpha-steps", b_alpha_steps, "Gain grid points")
      ->default_val(b_alpha_steps);
  bif->add_option("--samples", b_samples, "Uncoupled spins per gain value")
      ->default_val(b_samples);
  bif->add_option("--gamma", bif_sim.gamma, "Noise amplitude")
      ->default_val(cfg_or(cfg, "gamma", bif_sim.gamma));
  bif->add_option("--h", bif_sim.h, "Euler step in (0, 1]")
      ->default_val(cfg_or(cfg, "h", bif_sim.h));
  bif->add_option("--iterations", bif_sim.iterations,
                  "Settle budget in h=1 iteration units (steps = budget / h)")
      ->default_val(cfg_or(cfg, "iterations", bif_sim.iterations));
  bif->add_option("--seed", bif_sim.seed, "Master seed")
      ->default_val(cfg_or(cfg, "seed", bif_sim.seed));
  bif->add_option("--floor", b_floor,
                  "Detection floor for median |x| (0 = 10 * gamma)")
      ->default_val(b_floor);
  bif->add_option("--init", b_init,
                  "Initial amplitude, alternating sign across spins")
      ->default_val(b_init);
  bif->add_option("--workers", workers, "Parallel workers (0 = hardware)")
      ->default_val(cfg_or(cfg, "workers", 0));
  bif->add_option("--out", out_path, "CSV output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: args: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*solve) return cmd_solve(problem_path, optima_path, sim, trace_path);
    if (*scan)
      return cmd_scan(problem_path, optima_path, grid, sim, workers, out_path);
    if (*sweep)
      return cmd_sweep(sweep_kind, sweep_values, problem_path, optima_path,
                       grid, sim, workers, out_path, cfg);
    if (*bif)
      return cmd_bifurcation(b_alpha_min, b_alpha_max, b_alpha_steps,
                             b_samples, bif_sim, b_floor, b_init, workers,
                             out_path);
  } catch (const aim::ParseError& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: args: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
