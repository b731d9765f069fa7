#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cbomm/consensus.hpp"
#include "cbomm/ensemble.hpp"
#include "cbomm/objective.hpp"

namespace cbomm {

/// Target min-max point. Problems with several maximizers at x* list them all
/// in y_star_set; distances use the nearest one. When `y_free` is set the
/// whole line {x*} x Y is optimal and the y-error is taken as zero.
struct ReferencePoint {
  Vector x_star;
  std::vector<Vector> y_star_set;
  bool y_free = false;

  ReferencePoint() = default;
  ReferencePoint(Vector x, std::vector<Vector> ys, bool free_y = false);
};

struct BestPair {
  Vector x;
  Vector y;
  double value = 0.0;
  std::size_t i = 0;  ///< row of x in the ensemble
  std::size_t j = 0;  ///< row of y in the ensemble

  friend bool operator==(const BestPair&, const BestPair&) = default;
};

/// Empirical variance functionals (V^X, V^Y) against a reference point.
std::pair<double, double> variance(const Ensemble& ensemble, const ReferencePoint& ref);

/// Largest pairwise l-infinity distance between rows.
double spread(const ParticleMatrix& points);

/// Unweighted mean of the rows.
Vector mean(const ParticleMatrix& points);

/// min_i max_j E(X^i, Y^j) by exhaustive evaluation; ties go to the lowest i,
/// then the lowest j.
BestPair best_pair(const Ensemble& ensemble, const Objective& obj);

/// Same selection from an already evaluated N x M payoff matrix.
BestPair best_pair_from_payoff(const ParticleMatrix& xs, const ParticleMatrix& ys, std::span<const double> payoff);

/// Squared distance |x - x*|^2 + min_j |y - y*_j|^2.
double error_to_reference(std::span<const double> x, std::span<const double> y, const ReferencePoint& ref);
inline double error_to_reference(const BestPair& pair, const ReferencePoint& ref) {
  return error_to_reference(pair.x, pair.y, ref);
}

/// Per-step time series of one run; every series has steps + 1 entries
/// (t = 0 included). Series that need a reference point hold NaN when the run
/// had none.
struct RunRecord {
  std::vector<double> times;
  std::vector<double> variance_x;
  std::vector<double> variance_y;
  std::vector<double> spread_x;
  std::vector<double> spread_y;
  std::vector<Vector> mean_x;
  std::vector<Vector> mean_y;
  std::vector<Vector> consensus_x;
  std::vector<BestPair> best_pair_trace;
  std::vector<double> best_error;
  Ensemble final_ensemble;
  std::uint64_t eval_count = 0;

  std::size_t steps() const noexcept { return times.empty() ? 0 : times.size() - 1; }
  std::vector<double> total_variance() const;
};

/// Least-squares slope of log V(t) against t over the leading window where
/// V(t) stays above max(1e-12, 1e-3 V(0)). Negative means decay.
/// Throws InputError with fewer than 10 steps and NumericalError when the
/// window is too short to fit (for example an all-zero series).
double fit_decay_rate(std::span<const double> times, std::span<const double> values);
double fit_decay_rate(const RunRecord& record);

}  // namespace cbomm
