#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cbomm/diagnostics.hpp"
#include "cbomm/dynamics.hpp"
#include "cbomm/gda.hpp"
#include "cbomm/objective.hpp"
#include "cbomm/oracle.hpp"

namespace cbomm {

inline constexpr std::string_view kRunCsvSchema = "cbomm.run.v1";
inline constexpr std::string_view kSweepTrialsCsvSchema = "cbomm.sweep_trials.v1";
inline constexpr std::string_view kSweepSummaryCsvSchema = "cbomm.sweep_summary.v1";
inline constexpr std::string_view kGdaCsvSchema = "cbomm.gda.v1";
inline constexpr std::string_view kSummaryJsonSchema = "cbomm.summary.v1";
inline constexpr std::string_view kOracleJsonSchema = "cbomm.oracle.v1";

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "CBOMM_OUTPUT_DIR";

/// Grid used to certify reference points: 2049 points, 3 refinement rounds.
GridSpec reference_grid();

/// Global min-max reference for a benchmark. The three nonconvex-nonconcave
/// problems are certified by the grid oracle (computed once, then cached);
/// bilinear and bivariate use the line {0} x Y, remark_function (0, 0).
ReferencePoint reference_point(BenchmarkId id);

/// Horizon used for single runs: 30 for sixth_order, 15 otherwise.
double default_horizon(BenchmarkId id);

/// N=20, dt=0.1, lambda=1, sigma=1.5, alpha=beta=1e4, uniform init.
SolverConfig default_config();

std::string format_double(double v);

struct SolveSummary {
  std::string benchmark;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  double final_time = 0.0;
  BestPair best;
  double best_error = 0.0;
  std::uint64_t eval_count = 0;
  double wall_seconds = 0.0;
};

SolveSummary summarize_run(BenchmarkId id, const SolverConfig& config, const RunRecord& record,
                           double wall_seconds);

/// One row per recorded state. Columns: step, t, Vx, Vy, V, spread_x,
/// spread_y, mean_x0.., mean_y0.., best_value, best_err. Preceded by a
/// `# schema=` line.
void write_run_csv(std::ostream& out, const RunRecord& record);

/// JSON summary (schema cbomm.summary.v1).
std::string summary_json(const SolveSummary& summary, const SolverConfig& config);

enum class SweepParameter { NParticles, AlphaBeta, Sigma, EpsilonScale };

std::string_view sweep_parameter_name(SweepParameter p) noexcept;
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);

/// N=20, dt=0.1, lambda=1, sigma=1.5, alpha=beta=1e4, T=50, border init.
SolverConfig sweep_base_config();

struct SweepSpec {
  SweepParameter parameter = SweepParameter::NParticles;
  std::vector<double> values;
  std::size_t trials = 100;
  BenchmarkId benchmark = BenchmarkId::BilinearlyCoupled;
  /// Trial t uses seed base.seed + t.
  SolverConfig base = sweep_base_config();
};

/// Config of trial `trial` at parameter value `value`.
SolverConfig sweep_trial_config(const SweepSpec& spec, double value, std::size_t trial);

struct TrialResult {
  double parameter_value = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<double> error;  ///< empty when the trial failed
  std::string failure;
};

struct TrialSummary {
  double parameter_value = 0.0;
  double median = 0.0;
  double q20 = 0.0;
  double q80 = 0.0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::vector<std::optional<double>> errors;  ///< in trial order
};

/// Nearest-rank quantile: the ceil(p n)-th smallest value (rank at least 1).
double nearest_rank_quantile(std::vector<double> values, double p);

TrialSummary summarize_trials(double parameter_value, std::vector<std::optional<double>> errors);

/// Squared best-pair error at the final step of one run.
double final_error(BenchmarkId id, const SolverConfig& config);

struct SweepResult {
  std::vector<TrialResult> trials;  ///< ordered by (value, trial)
  std::vector<TrialSummary> summaries;
};

/// Runs every (value, trial) pair on up to `jobs` threads. Failed trials are
/// recorded, not rethrown. Throws InputError on an empty value list or zero
/// trials and ConfigError if the base config is invalid.
SweepResult run_sweep(const SweepSpec& spec, std::size_t jobs = 1);

void write_sweep_trials_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result);
void write_sweep_summary_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result);

std::string oracle_json(BenchmarkId id, const GridSpec& grid, const OracleSolution& sol, double wall_seconds);

/// Columns: iter, x0.., y0.., norm.
void write_gda_csv(std::ostream& out, const GdaTrajectory& trajectory);

}  // namespace cbomm
