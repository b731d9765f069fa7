#pragma once

#include <span>
#include <vector>

#include "cbomm/ensemble.hpp"
#include "cbomm/objective.hpp"

namespace cbomm {

struct WeightParams {
  double alpha = 1e4;  ///< weight exp(-alpha E) on the minimizing population
  double beta = 1e4;   ///< weight exp(+beta E) on the maximizing population
};

/// Normalized weights w_i proportional to exp(e_i), computed as
/// exp(e_i - max_j e_j) so the largest exponent is exactly 0.
/// Throws NumericalError (with index) on a non-finite exponent and InputError
/// on an empty input.
std::vector<double> stable_weights(std::span<const double> exponents);

/// Weighted average of the rows of `points`, clamped into the per-coordinate
/// hull of the rows so rounding cannot push it outside.
Vector weighted_mean(const ParticleMatrix& points, std::span<const double> weights);

/// Soft-argmax of E(x, .) over the Y-ensemble: sum_i w_i Y^i with
/// w_i ~ exp(beta E(x, Y^i)).
Vector y_consensus(const Objective& obj, const ParticleMatrix& ys, std::span<const double> x, double beta);

/// Everything derived from one pre-step snapshot of the ensemble.
struct ConsensusResult {
  /// Soft-min over the X-ensemble of E(X^i, y_cons[i]).
  Vector x_cons;
  /// Row i is Y_beta evaluated at particle X^i.
  ParticleMatrix y_cons;
  /// payoff[i * n_y + j] = E(X^i, Y^j). Each pair is evaluated exactly once.
  std::vector<double> payoff;
  std::size_t n_y = 0;
  /// E(X^i, y_cons[i]), the inputs to the outer weights.
  std::vector<double> outer_values;

  double payoff_at(std::size_t i, std::size_t j) const noexcept { return payoff[i * n_y + j]; }
};

/// Computes both consensus points from a single fill of the N x N payoff
/// matrix plus N evaluations at the inner consensus points.
ConsensusResult compute_consensus(const Objective& obj, const ParticleMatrix& xs, const ParticleMatrix& ys,
                                  const WeightParams& params);

/// Convenience wrapper returning only the x consensus point.
Vector x_consensus(const Objective& obj, const ParticleMatrix& xs, const ParticleMatrix& ys, double alpha,
                   double beta);

enum class Extremum { Min, Max };

/// Laplace-principle gap |soft_ext - ext| for a set of objective values, with
/// soft_min = -(1/p) log mean exp(-p E) and soft_max = (1/p) log mean exp(p E).
/// Shrinks to 0 as p grows. Throws InputError for p <= 0 or empty input.
double laplace_gap(std::span<const double> values, double param, Extremum mode);

/// Gap over an ensemble with the other variable fixed: for Min, the rows are
/// x-particles and `fixed_point` is y; for Max the rows are y-particles and
/// `fixed_point` is x.
double laplace_gap(const Objective& obj, const ParticleMatrix& ensemble, std::span<const double> fixed_point,
                   double param, Extremum mode);

}  // namespace cbomm
