#include "cli_commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "acceptance/acceptance.hpp"
#include "cbomm/config_file.hpp"
#include "cbomm/errors.hpp"
#include "cbomm/harness.hpp"

namespace cbomm::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// String-valued flags that overlay a settings map only when given, so the
// precedence is flags > config file > defaults.
struct Overlay {
  std::map<std::string, std::string> values;     // key -> raw flag text
  std::map<std::string, std::string> flag_keys;  // option name -> key

  void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    auto* opt = app.add_option(flag, values[key], help);
    flag_keys[opt->get_name()] = key;
  }

  void apply(const CLI::App& app, Settings& settings) const {
    for (const auto* opt : app.get_options()) {
      if (opt->count() == 0) continue;
      if (auto it = flag_keys.find(opt->get_name()); it != flag_keys.end()) {
        settings[it->second] = values.at(it->second);
      }
    }
  }
};

void add_solver_flags(CLI::App& app, Overlay& ov) {
  ov.add(app, "--seed", "seed", "RNG seed");
  ov.add(app, "--T,--horizon", "horizon", "time horizon");
  ov.add(app, "--N,--particles", "n_particles", "particles per population");
  ov.add(app, "--lambda", "lambda", "drift strength (both populations)");
  ov.add(app, "--sigma", "sigma", "diffusion strength (both populations)");
  ov.add(app, "--alpha", "alpha", "weight parameter of the minimizing population");
  ov.add(app, "--beta", "beta", "weight parameter of the maximizing population");
  ov.add(app, "--dt", "dt", "time step of the y population");
  ov.add(app, "--epsilon", "epsilon", "time-scale ratio dt_x / dt_y");
  ov.add(app, "--init", "init", "uniform | border | gaussian");
  ov.add(app, "--diffusion", "diffusion", "anisotropic | isotropic");
  ov.add(app, "--project", "project", "clamp particles to the box (true|false)");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "'");
    }
    if (used != item.size()) throw ConfigError("cannot parse number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

BenchmarkId require_benchmark(const Settings& settings) {
  auto it = settings.find("benchmark");
  if (it == settings.end() || it->second.empty()) throw ConfigError("missing benchmark (use --benchmark)");
  auto id = parse_benchmark(it->second);
  if (!id) throw ConfigError("unknown benchmark '" + it->second + "'");
  return *id;
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return ".";
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << content;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct SolveArgs {
  std::string benchmark, config_path, out_dir, name;
  Overlay overlay;
};

int do_solve(const CLI::App& app, SolveArgs& a, std::ostream& out) {
  Settings settings;
  if (!a.config_path.empty()) settings = load_settings_file(a.config_path);
  if (!a.benchmark.empty()) settings["benchmark"] = a.benchmark;
  a.overlay.apply(app, settings);
  const BenchmarkId id = require_benchmark(settings);

  SolverConfig config = default_config();
  config.horizon = default_horizon(id);
  apply_settings(settings, config);
  validate(config);

  RunOptions opts;
  opts.reference = reference_point(id);
  const auto start = Clock::now();
  const RunRecord rec = run(config, make_benchmark(id), opts);
  const SolveSummary summary = summarize_run(id, config, rec, seconds_since(start));

  const fs::path dir = output_dir(a.out_dir);
  fs::create_directories(dir);
  const std::string stem =
      a.name.empty() ? "solve_" + std::string(benchmark_name(id)) + "_seed" + std::to_string(config.seed) : a.name;
  std::ostringstream csv;
  write_run_csv(csv, rec);
  write_file(dir / (stem + ".csv"), csv.str());
  write_file(dir / (stem + ".json"), summary_json(summary, config) + "\n");
  out << "best pair x=" << format_double(summary.best.x[0]) << " y=" << format_double(summary.best.y[0])
      << " err=" << format_double(summary.best_error) << " evals=" << summary.eval_count << '\n';
  out << "wrote " << (dir / (stem + ".csv")).string() << " and " << (dir / (stem + ".json")).string() << '\n';
  return kExitOk;
}

struct SweepArgs {
  std::string benchmark, config_path, out_dir, name, parameter, values;
  std::size_t trials = 100;
  std::size_t jobs = 1;
  Overlay overlay;
};

int do_sweep(const CLI::App& app, SweepArgs& a, std::ostream& out) {
  Settings settings;
  if (!a.config_path.empty()) settings = load_settings_file(a.config_path);
  if (!a.benchmark.empty()) settings["benchmark"] = a.benchmark;
  a.overlay.apply(app, settings);
  const BenchmarkId id = require_benchmark(settings);

  SweepSpec spec;
  spec.benchmark = id;
  std::string param = a.parameter;
  if (param.empty() && settings.contains("parameter")) param = settings.at("parameter");
  const auto p = parse_sweep_parameter(param);
  if (!p) throw ConfigError("unknown or missing sweep parameter '" + param + "'");
  spec.parameter = *p;
  std::string values = a.values;
  if (values.empty() && settings.contains("values")) values = settings.at("values");
  spec.values = parse_list(values);
  if (spec.values.empty()) throw ConfigError("sweep needs --values");
  spec.trials = a.trials;
  if (app.get_option("--trials")->count() == 0 && settings.contains("trials")) {
    spec.trials = static_cast<std::size_t>(std::stoul(settings.at("trials")));
  }
  if (spec.trials == 0) throw ConfigError("trials must be positive");
  apply_settings(settings, spec.base);

  const SweepResult result = run_sweep(spec, a.jobs);
  const fs::path dir = output_dir(a.out_dir);
  fs::create_directories(dir);
  const std::string stem = a.name.empty() ? "sweep_" + std::string(benchmark_name(id)) + "_" +
                                                std::string(sweep_parameter_name(spec.parameter))
                                          : a.name;
  std::ostringstream trials_csv, summary_csv;
  write_sweep_trials_csv(trials_csv, spec, result);
  write_sweep_summary_csv(summary_csv, spec, result);
  write_file(dir / (stem + "_trials.csv"), trials_csv.str());
  write_file(dir / (stem + "_summary.csv"), summary_csv.str());
  out << summary_csv.str();
  return kExitOk;
}

struct OracleArgs {
  std::string benchmark, out_path;
  std::size_t points = 2049;
  std::size_t rounds = 3;
};

int do_oracle(OracleArgs& a, std::ostream& out) {
  Settings s{{"benchmark", a.benchmark}};
  const BenchmarkId id = require_benchmark(s);
  GridSpec grid;
  grid.points_per_dim = a.points;
  grid.refine_rounds = a.rounds;
  const auto start = Clock::now();
  const OracleSolution sol = solve_minmax(make_benchmark(id), grid);
  const std::string doc = oracle_json(id, grid, sol, seconds_since(start)) + "\n";
  if (a.out_path.empty()) {
    out << doc;
  } else {
    write_file(a.out_path, doc);
  }
  return kExitOk;
}

struct GdaArgs {
  std::string benchmark, mode = "simultaneous", start = "1,0", out_path;
  double eta = 0.1;
  std::size_t iters = 100;
};

int do_gda(GdaArgs& a, std::ostream& out) {
  Settings s{{"benchmark", a.benchmark}};
  const BenchmarkId id = require_benchmark(s);
  const Objective obj = make_benchmark(id);
  GdaConfig cfg;
  cfg.step_size = a.eta;
  cfg.iterations = a.iters;
  if (a.mode == "simultaneous") {
    cfg.mode = GdaMode::Simultaneous;
  } else if (a.mode == "alternating") {
    cfg.mode = GdaMode::Alternating;
  } else {
    throw ConfigError("gda mode must be simultaneous or alternating");
  }
  const auto start = parse_list(a.start);
  if (start.size() != obj.dim_x() + obj.dim_y()) throw ConfigError("--start needs dim_x + dim_y numbers");
  cfg.start_x.assign(start.begin(), start.begin() + static_cast<long>(obj.dim_x()));
  cfg.start_y.assign(start.begin() + static_cast<long>(obj.dim_x()), start.end());
  if (!(cfg.step_size > 0.0)) throw ConfigError("--eta must be positive");
  const GdaTrajectory traj = gda_run(obj, cfg);
  std::ostringstream csv;
  write_gda_csv(csv, traj);
  if (a.out_path.empty()) {
    out << csv.str();
  } else {
    write_file(a.out_path, csv.str());
  }
  return kExitOk;
}

struct BenchArgs {
  std::vector<int> only;
};

int do_bench(BenchArgs& a, std::ostream& out) {
  const auto results = acceptance::run_all(out, a.only);
  for (const auto& r : results) {
    if (!r.passed) return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consensus-based particle solver for min-max problems"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "single run; writes a per-step CSV and a JSON summary");
  solve->add_option("--benchmark,-b", solve_args.benchmark, "benchmark id");
  solve->add_option("--config,-c", solve_args.config_path, "key = value settings file");
  solve->add_option("--out,-o", solve_args.out_dir, "output directory (default $CBOMM_OUTPUT_DIR or .)");
  solve->add_option("--name", solve_args.name, "output file stem");
  add_solver_flags(*solve, solve_args.overlay);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "multi-seed parameter sweep; writes per-trial and summary CSVs");
  sweep->add_option("--benchmark,-b", sweep_args.benchmark, "benchmark id");
  sweep->add_option("--config,-c", sweep_args.config_path, "key = value settings file");
  sweep->add_option("--param,-p", sweep_args.parameter, "n_particles | alpha_beta | sigma | epsilon_scale");
  sweep->add_option("--values,-v", sweep_args.values, "comma-separated values");
  sweep->add_option("--trials", sweep_args.trials, "runs per value (seed = base seed + trial)");
  sweep->add_option("--jobs,-j", sweep_args.jobs, "worker threads");
  sweep->add_option("--out,-o", sweep_args.out_dir, "output directory");
  sweep->add_option("--name", sweep_args.name, "output file stem");
  add_solver_flags(*sweep, sweep_args.overlay);

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "grid-certified global min-max point as JSON");
  oracle->add_option("--benchmark,-b", oracle_args.benchmark, "benchmark id");
  oracle->add_option("--points", oracle_args.points, "grid points per dimension");
  oracle->add_option("--rounds", oracle_args.rounds, "refinement rounds");
  oracle->add_option("--out,-o", oracle_args.out_path, "output file (default stdout)");

  GdaArgs gda_args;
  auto* gda = app.add_subcommand("gda", "gradient descent-ascent trajectory as CSV");
  gda->add_option("--benchmark,-b", gda_args.benchmark, "benchmark id");
  gda->add_option("--mode", gda_args.mode, "simultaneous | alternating");
  gda->add_option("--eta", gda_args.eta, "step size");
  gda->add_option("--iters", gda_args.iters, "iterations");
  gda->add_option("--start", gda_args.start, "start point x..,y..");
  gda->add_option("--out,-o", gda_args.out_path, "output file (default stdout)");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "run the acceptance suite");
  bench->add_option("--only", bench_args.only, "criterion numbers to run");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*solve) return do_solve(*solve, solve_args, out);
    if (*sweep) return do_sweep(*sweep, sweep_args, out);
    if (*oracle) return do_oracle(oracle_args, out);
    if (*gda) return do_gda(gda_args, out);
    if (*bench) return do_bench(bench_args, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace cbomm::cli
