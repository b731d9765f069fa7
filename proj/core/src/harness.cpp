#include "cbomm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "cbomm/errors.hpp"
#include "json.hpp"

namespace cbomm {

using nlohmann::json;

GridSpec reference_grid() {
  GridSpec g;
  g.points_per_dim = 2049;
  g.refine_rounds = 3;
  return g;
}

ReferencePoint reference_point(BenchmarkId id) {
  switch (id) {
    // Both examples have the min-max set {0} x Y: every y maximizes E(0, .).
    case BenchmarkId::Bilinear:
    case BenchmarkId::Bivariate: return ReferencePoint({0.0}, {{0.0}}, /*free_y=*/true);
    case BenchmarkId::RemarkFunction: return ReferencePoint({0.0}, {{0.0}});
    case BenchmarkId::BilinearlyCoupled:
    case BenchmarkId::Forsaken:
    case BenchmarkId::SixthOrder: break;
  }
  static std::mutex mutex;
  static std::map<BenchmarkId, ReferencePoint> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(id); it != cache.end()) return it->second;
  const OracleSolution sol = solve_minmax(make_benchmark(id), reference_grid());
  ReferencePoint ref(sol.x_star, sol.y_star_all);
  cache.emplace(id, ref);
  return ref;
}

double default_horizon(BenchmarkId id) { return id == BenchmarkId::SixthOrder ? 30.0 : 15.0; }

SolverConfig default_config() {
  SolverConfig c;
  c.n_particles = 20;
  c.dt_y = 0.1;
  c.lambda_x = c.lambda_y = 1.0;
  c.sigma_x = c.sigma_y = 1.5;
  c.alpha = c.beta = 1e4;
  c.init = InitSpec::uniform_box();
  c.horizon = 15.0;
  return c;
}

SolverConfig sweep_base_config() {
  SolverConfig c = default_config();
  c.horizon = 50.0;
  c.init = InitSpec::border();
  return c;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

SolveSummary summarize_run(BenchmarkId id, const SolverConfig& config, const RunRecord& record,
                           double wall_seconds) {
  SolveSummary s;
  s.benchmark = std::string(benchmark_name(id));
  s.seed = config.seed;
  s.steps = record.steps();
  s.final_time = record.times.empty() ? 0.0 : record.times.back();
  s.best = record.best_pair_trace.back();
  s.best_error = record.best_error.back();
  s.eval_count = record.eval_count;
  s.wall_seconds = wall_seconds;
  return s;
}

void write_run_csv(std::ostream& out, const RunRecord& rec) {
  const std::size_t dx = rec.mean_x.empty() ? 0 : rec.mean_x.front().size();
  const std::size_t dy = rec.mean_y.empty() ? 0 : rec.mean_y.front().size();
  out << "# schema=" << kRunCsvSchema << '\n';
  out << "step,t,Vx,Vy,V,spread_x,spread_y";
  for (std::size_t k = 0; k < dx; ++k) out << ",mean_x" << k;
  for (std::size_t k = 0; k < dy; ++k) out << ",mean_y" << k;
  out << ",best_value,best_err\n";
  for (std::size_t s = 0; s < rec.times.size(); ++s) {
    out << s << ',' << format_double(rec.times[s]) << ',' << format_double(rec.variance_x[s]) << ','
        << format_double(rec.variance_y[s]) << ',' << format_double(rec.variance_x[s] + rec.variance_y[s]) << ','
        << format_double(rec.spread_x[s]) << ',' << format_double(rec.spread_y[s]);
    for (double m : rec.mean_x[s]) out << ',' << format_double(m);
    for (double m : rec.mean_y[s]) out << ',' << format_double(m);
    out << ',' << format_double(rec.best_pair_trace[s].value) << ',' << format_double(rec.best_error[s]) << '\n';
  }
}

namespace {

json nan_to_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json config_json(const SolverConfig& c) {
  return json{{"n_particles", c.n_particles},
              {"lambda_x", c.lambda_x},
              {"lambda_y", c.lambda_y},
              {"sigma_x", c.sigma_x},
              {"sigma_y", c.sigma_y},
              {"alpha", c.alpha},
              {"beta", c.beta},
              {"dt_y", c.dt_y},
              {"dt_x", c.dt_x()},
              {"epsilon_scale", c.epsilon_scale},
              {"horizon", c.horizon},
              {"diffusion", c.diffusion == DiffusionMode::Anisotropic ? "anisotropic" : "isotropic"},
              {"init", c.init.mode == InitSpec::Mode::UniformBox ? "uniform"
                       : c.init.mode == InitSpec::Mode::Border   ? "border"
                                                                 : "gaussian"},
              {"project", c.project},
              {"seed", c.seed}};
}

}  // namespace

std::string summary_json(const SolveSummary& s, const SolverConfig& config) {
  json j{{"schema", kSummaryJsonSchema},
         {"benchmark", s.benchmark},
         {"seed", s.seed},
         {"steps", s.steps},
         {"final_time", s.final_time},
         {"best_pair", {{"x", s.best.x}, {"y", s.best.y}, {"value", s.best.value}}},
         {"best_err", nan_to_null(s.best_error)},
         {"eval_count", s.eval_count},
         {"wall_seconds", s.wall_seconds},
         {"config", config_json(config)}};
  return j.dump(2);
}

std::string_view sweep_parameter_name(SweepParameter p) noexcept {
  switch (p) {
    case SweepParameter::NParticles: return "n_particles";
    case SweepParameter::AlphaBeta: return "alpha_beta";
    case SweepParameter::Sigma: return "sigma";
    case SweepParameter::EpsilonScale: return "epsilon_scale";
  }
  return "unknown";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
  for (auto p : {SweepParameter::NParticles, SweepParameter::AlphaBeta, SweepParameter::Sigma,
                 SweepParameter::EpsilonScale}) {
    if (sweep_parameter_name(p) == name) return p;
  }
  if (name == "N") return SweepParameter::NParticles;
  if (name == "epsilon") return SweepParameter::EpsilonScale;
  return std::nullopt;
}

SolverConfig sweep_trial_config(const SweepSpec& spec, double value, std::size_t trial) {
  SolverConfig c = spec.base;
  switch (spec.parameter) {
    case SweepParameter::NParticles:
      if (!(value >= 1.0) || value != std::floor(value)) throw ConfigError("n_particles sweep values must be integers >= 1");
      c.n_particles = static_cast<std::size_t>(value);
      break;
    case SweepParameter::AlphaBeta: c.alpha = c.beta = value; break;
    case SweepParameter::Sigma: c.sigma_x = c.sigma_y = value; break;
    case SweepParameter::EpsilonScale: c.epsilon_scale = value; break;
  }
  c.seed = spec.base.seed + trial;
  return c;
}

double nearest_rank_quantile(std::vector<double> values, double p) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  std::size_t rank = static_cast<std::size_t>(std::ceil(p * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

TrialSummary summarize_trials(double parameter_value, std::vector<std::optional<double>> errors) {
  TrialSummary s;
  s.parameter_value = parameter_value;
  std::vector<double> ok;
  for (const auto& e : errors) {
    if (e) ok.push_back(*e);
  }
  s.completed = ok.size();
  s.failed = errors.size() - ok.size();
  s.median = nearest_rank_quantile(ok, 0.5);
  s.q20 = nearest_rank_quantile(ok, 0.2);
  s.q80 = nearest_rank_quantile(ok, 0.8);
  s.errors = std::move(errors);
  return s;
}

double final_error(BenchmarkId id, const SolverConfig& config) {
  RunOptions opts;
  opts.reference = reference_point(id);
  const RunRecord rec = run(config, make_benchmark(id), opts);
  return rec.best_error.back();
}

SweepResult run_sweep(const SweepSpec& spec, std::size_t jobs) {
  if (spec.values.empty()) throw InputError("sweep: no parameter values");
  if (spec.trials == 0) throw InputError("sweep: trials must be positive");
  for (double v : spec.values) validate(sweep_trial_config(spec, v, 0));
  reference_point(spec.benchmark);  // certify once before fanning out

  const std::size_t total = spec.values.size() * spec.trials;
  SweepResult result;
  result.trials.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      const double value = spec.values[idx / spec.trials];
      const std::size_t trial = idx % spec.trials;
      TrialResult& tr = result.trials[idx];
      tr.parameter_value = value;
      tr.trial = trial;
      const SolverConfig cfg = sweep_trial_config(spec, value, trial);
      tr.seed = cfg.seed;
      try {
        tr.error = final_error(spec.benchmark, cfg);
      } catch (const std::exception& e) {
        tr.failure = e.what();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, total);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t v = 0; v < spec.values.size(); ++v) {
    std::vector<std::optional<double>> errors;
    for (std::size_t t = 0; t < spec.trials; ++t) errors.push_back(result.trials[v * spec.trials + t].error);
    result.summaries.push_back(summarize_trials(spec.values[v], std::move(errors)));
  }
  return result;
}

void write_sweep_trials_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result) {
  out << "# schema=" << kSweepTrialsCsvSchema << " benchmark=" << benchmark_name(spec.benchmark)
      << " parameter=" << sweep_parameter_name(spec.parameter) << '\n';
  out << "value,trial,seed,error\n";
  for (const auto& t : result.trials) {
    out << format_double(t.parameter_value) << ',' << t.trial << ',' << t.seed << ','
        << (t.error ? format_double(*t.error) : std::string()) << '\n';
  }
}

void write_sweep_summary_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result) {
  out << "# schema=" << kSweepSummaryCsvSchema << " benchmark=" << benchmark_name(spec.benchmark)
      << " parameter=" << sweep_parameter_name(spec.parameter) << " quantiles=nearest_rank\n";
  out << "value,median,q20,q80,completed,failed\n";
  for (const auto& s : result.summaries) {
    out << format_double(s.parameter_value) << ',' << format_double(s.median) << ',' << format_double(s.q20) << ','
        << format_double(s.q80) << ',' << s.completed << ',' << s.failed << '\n';
  }
}

std::string oracle_json(BenchmarkId id, const GridSpec& grid, const OracleSolution& sol, double wall_seconds) {
  json env = json::array();
  for (const auto& [x, v] : sol.envelope_samples) env.push_back({{"x", x}, {"value", v}});
  json j{{"schema", kOracleJsonSchema},
         {"benchmark", benchmark_name(id)},
         {"x_star", sol.x_star},
         {"y_star", sol.y_star},
         {"y_star_all", sol.y_star_all},
         {"value", sol.value},
         {"resolution", sol.resolution},
         {"round_values", sol.round_values},
         {"grid", {{"points_per_dim", grid.points_per_dim}, {"refine_rounds", grid.refine_rounds}}},
         {"wall_seconds", wall_seconds},
         {"envelope_samples", std::move(env)}};
  return j.dump(2);
}

void write_gda_csv(std::ostream& out, const GdaTrajectory& traj) {
  const std::size_t dx = traj.points.empty() ? 0 : traj.points.front().first.size();
  const std::size_t dy = traj.points.empty() ? 0 : traj.points.front().second.size();
  out << "# schema=" << kGdaCsvSchema << (traj.diverged ? " diverged=true" : "") << '\n';
  out << "iter";
  for (std::size_t k = 0; k < dx; ++k) out << ",x" << k;
  for (std::size_t k = 0; k < dy; ++k) out << ",y" << k;
  out << ",norm\n";
  for (std::size_t it = 0; it < traj.points.size(); ++it) {
    const auto& [x, y] = traj.points[it];
    double n2 = 0.0;
    out << it;
    for (double v : x) {
      out << ',' << format_double(v);
      n2 += v * v;
    }
    for (double v : y) {
      out << ',' << format_double(v);
      n2 += v * v;
    }
    out << ',' << format_double(std::sqrt(n2)) << '\n';
  }
}

}  // namespace cbomm
