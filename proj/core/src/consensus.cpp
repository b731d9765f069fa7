#include "cbomm/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cbomm/errors.hpp"

namespace cbomm {

namespace {

constexpr double kUnderflowExponent = -746.0;

void require_finite(double value, std::size_t index, const char* what) {
  if (!std::isfinite(value)) {
    throw NumericalError(std::string(what) + ": non-finite value at particle " + std::to_string(index), index);
  }
}

void require_nonempty(const ParticleMatrix& m, const char* what) {
  if (m.empty()) throw InputError(std::string(what) + ": empty ensemble");
}

void require_nonnegative(double p, const char* what) {
  if (!(p >= 0.0) || !std::isfinite(p)) throw InputError(std::string(what) + " must be finite and >= 0");
}

}  // namespace

std::vector<double> stable_weights(std::span<const double> exponents) {
  if (exponents.empty()) throw InputError("stable_weights: empty input");
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    require_finite(exponents[i], i, "stable_weights");
    top = std::max(top, exponents[i]);
  }
  std::vector<double> w(exponents.size());
  double total = 0.0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    const double shifted = exponents[i] - top;
    // exp underflows to exactly 0 below this; skip the call.
    w[i] = shifted < kUnderflowExponent ? 0.0 : std::exp(shifted);
    total += w[i];
  }
  // total >= 1 since the largest term is exp(0).
  for (double& wi : w) wi /= total;
  return w;
}

Vector weighted_mean(const ParticleMatrix& points, std::span<const double> weights) {
  require_nonempty(points, "weighted_mean");
  if (weights.size() != points.rows()) throw InputError("weighted_mean: weight count mismatch");
  const std::size_t d = points.cols();
  Vector out(d, 0.0);
  Vector lo(points.row(0).begin(), points.row(0).end());
  Vector hi = lo;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto r = points.row(i);
    for (std::size_t k = 0; k < d; ++k) {
      out[k] += weights[i] * r[k];
      lo[k] = std::min(lo[k], r[k]);
      hi[k] = std::max(hi[k], r[k]);
    }
  }
  for (std::size_t k = 0; k < d; ++k) out[k] = std::clamp(out[k], lo[k], hi[k]);
  return out;
}

Vector y_consensus(const Objective& obj, const ParticleMatrix& ys, std::span<const double> x, double beta) {
  require_nonempty(ys, "y_consensus");
  require_nonnegative(beta, "y_consensus: beta");
  if (x.size() != obj.dim_x() || ys.cols() != obj.dim_y()) throw InputError("y_consensus: dimension mismatch");
  std::vector<double> exponents(ys.rows());
  for (std::size_t j = 0; j < ys.rows(); ++j) {
    const double e = obj.evaluate_raw(x, ys.row(j));
    require_finite(e, j, "y_consensus");
    exponents[j] = beta * e;
  }
  obj.add_evaluations(ys.rows());
  return weighted_mean(ys, stable_weights(exponents));
}

ConsensusResult compute_consensus(const Objective& obj, const ParticleMatrix& xs, const ParticleMatrix& ys,
                                  const WeightParams& params) {
  require_nonempty(xs, "x_consensus");
  require_nonempty(ys, "x_consensus");
  require_nonnegative(params.alpha, "x_consensus: alpha");
  require_nonnegative(params.beta, "x_consensus: beta");
  if (xs.cols() != obj.dim_x() || ys.cols() != obj.dim_y()) throw InputError("x_consensus: dimension mismatch");

  const std::size_t nx = xs.rows();
  const std::size_t ny = ys.rows();
  ConsensusResult out;
  out.payoff.resize(nx * ny);
  out.n_y = ny;
  out.y_cons = ParticleMatrix(nx, ys.cols());
  out.outer_values.resize(nx);

  std::vector<double> exponents(ny);
  for (std::size_t i = 0; i < nx; ++i) {
    const auto xi = xs.row(i);
    double* row = out.payoff.data() + i * ny;
    for (std::size_t j = 0; j < ny; ++j) {
      row[j] = obj.evaluate_raw(xi, ys.row(j));
      require_finite(row[j], j, "y_consensus");
      exponents[j] = params.beta * row[j];
    }
    const Vector yhat = weighted_mean(ys, stable_weights(exponents));
    std::copy(yhat.begin(), yhat.end(), out.y_cons.row(i).begin());
    out.outer_values[i] = obj.evaluate_raw(xi, yhat);
    require_finite(out.outer_values[i], i, "x_consensus");
  }
  obj.add_evaluations(nx * ny + nx);

  std::vector<double> outer_exponents(nx);
  for (std::size_t i = 0; i < nx; ++i) outer_exponents[i] = -params.alpha * out.outer_values[i];
  out.x_cons = weighted_mean(xs, stable_weights(outer_exponents));
  return out;
}

Vector x_consensus(const Objective& obj, const ParticleMatrix& xs, const ParticleMatrix& ys, double alpha,
                   double beta) {
  return compute_consensus(obj, xs, ys, WeightParams{alpha, beta}).x_cons;
}

double laplace_gap(std::span<const double> values, double param, Extremum mode) {
  if (values.empty()) throw InputError("laplace_gap: empty ensemble");
  if (!(param > 0.0) || !std::isfinite(param)) throw InputError("laplace_gap: param must be finite and > 0");
  // sign = +1 turns both modes into a soft-max of sign * E.
  const double sign = mode == Extremum::Max ? 1.0 : -1.0;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    require_finite(values[i], i, "laplace_gap");
    top = std::max(top, sign * values[i]);
  }
  double acc = 0.0;
  for (double v : values) acc += std::exp(param * (sign * v - top));
  // soft = top + (1/p) log mean exp(p (sign E - top)) is <= top, so the gap is top - soft.
  const double log_mean = std::log(acc / static_cast<double>(values.size()));
  return std::abs(log_mean / param);
}

double laplace_gap(const Objective& obj, const ParticleMatrix& ensemble, std::span<const double> fixed_point,
                   double param, Extremum mode) {
  require_nonempty(ensemble, "laplace_gap");
  std::vector<double> values(ensemble.rows());
  for (std::size_t i = 0; i < ensemble.rows(); ++i) {
    values[i] = mode == Extremum::Min ? obj.evaluate(ensemble.row(i), fixed_point)
                                      : obj.evaluate(fixed_point, ensemble.row(i));
  }
  return laplace_gap(values, param, mode);
}

}  // namespace cbomm
