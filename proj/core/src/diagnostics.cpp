#include "cbomm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cbomm/errors.hpp"

namespace cbomm {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double nearest_y_distance(std::span<const double> y, const ReferencePoint& ref) {
  if (ref.y_free) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ys : ref.y_star_set) best = std::min(best, squared_distance(y, ys));
  return best;
}

}  // namespace

ReferencePoint::ReferencePoint(Vector x, std::vector<Vector> ys, bool free_y)
    : x_star(std::move(x)), y_star_set(std::move(ys)), y_free(free_y) {
  if (y_star_set.empty()) throw InputError("ReferencePoint: y_star_set must be nonempty");
  for (const auto& y : y_star_set) {
    if (y.size() != y_star_set.front().size()) throw InputError("ReferencePoint: ragged y_star_set");
  }
}

std::pair<double, double> variance(const Ensemble& ensemble, const ReferencePoint& ref) {
  const std::size_t n = ensemble.size();
  if (n == 0) return {0.0, 0.0};
  if (ref.x_star.size() != ensemble.xs.cols() || ref.y_star_set.front().size() != ensemble.ys.cols()) {
    throw InputError("variance: reference dimension mismatch");
  }
  double vx = 0.0;
  double vy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    vx += squared_distance(ensemble.xs.row(i), ref.x_star);
    vy += nearest_y_distance(ensemble.ys.row(i), ref);
  }
  return {vx / static_cast<double>(n), vy / static_cast<double>(n)};
}

double spread(const ParticleMatrix& points) {
  if (points.empty()) return 0.0;
  double widest = 0.0;
  for (std::size_t k = 0; k < points.cols(); ++k) {
    double lo = points(0, k);
    double hi = lo;
    for (std::size_t i = 1; i < points.rows(); ++i) {
      lo = std::min(lo, points(i, k));
      hi = std::max(hi, points(i, k));
    }
    widest = std::max(widest, hi - lo);
  }
  return widest;
}

Vector mean(const ParticleMatrix& points) {
  Vector m(points.cols(), 0.0);
  if (points.empty()) return m;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    for (std::size_t k = 0; k < points.cols(); ++k) m[k] += points(i, k);
  }
  for (double& v : m) v /= static_cast<double>(points.rows());
  return m;
}

BestPair best_pair_from_payoff(const ParticleMatrix& xs, const ParticleMatrix& ys, std::span<const double> payoff) {
  const std::size_t nx = xs.rows();
  const std::size_t ny = ys.rows();
  if (nx == 0 || ny == 0) throw InputError("best_pair: empty ensemble");
  if (payoff.size() != nx * ny) throw InputError("best_pair: payoff size mismatch");
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nx; ++i) {
    const double* row = payoff.data() + i * ny;
    std::size_t arg = 0;
    for (std::size_t j = 1; j < ny; ++j) {
      if (row[j] > row[arg]) arg = j;
    }
    if (row[arg] < best_value) {
      best_value = row[arg];
      best_i = i;
      best_j = arg;
    }
  }
  BestPair bp;
  bp.x.assign(xs.row(best_i).begin(), xs.row(best_i).end());
  bp.y.assign(ys.row(best_j).begin(), ys.row(best_j).end());
  bp.value = best_value;
  bp.i = best_i;
  bp.j = best_j;
  return bp;
}

BestPair best_pair(const Ensemble& ensemble, const Objective& obj) {
  const std::size_t nx = ensemble.xs.rows();
  const std::size_t ny = ensemble.ys.rows();
  if (nx == 0 || ny == 0) throw InputError("best_pair: empty ensemble");
  std::vector<double> payoff(nx * ny);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) payoff[i * ny + j] = obj.evaluate(ensemble.xs.row(i), ensemble.ys.row(j));
  }
  return best_pair_from_payoff(ensemble.xs, ensemble.ys, payoff);
}

double error_to_reference(std::span<const double> x, std::span<const double> y, const ReferencePoint& ref) {
  if (x.size() != ref.x_star.size() || y.size() != ref.y_star_set.front().size()) {
    throw InputError("error_to_reference: dimension mismatch");
  }
  return squared_distance(x, ref.x_star) + nearest_y_distance(y, ref);
}

std::vector<double> RunRecord::total_variance() const {
  std::vector<double> v(variance_x.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = variance_x[k] + variance_y[k];
  return v;
}

double fit_decay_rate(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw InputError("fit_decay_rate: length mismatch");
  if (times.size() < 11) throw InputError("fit_decay_rate: need at least 10 steps");
  const double floor = std::max(1e-12, 1e-3 * values.front());
  std::size_t end = 0;
  while (end < values.size() && std::isfinite(values[end]) && values[end] > floor) ++end;
  if (end < 2) throw NumericalError("fit_decay_rate: variance window too short for a fit");

  double st = 0.0, sl = 0.0;
  for (std::size_t k = 0; k < end; ++k) {
    st += times[k];
    sl += std::log(values[k]);
  }
  const double n = static_cast<double>(end);
  const double t_mean = st / n;
  const double l_mean = sl / n;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < end; ++k) {
    const double dt = times[k] - t_mean;
    num += dt * (std::log(values[k]) - l_mean);
    den += dt * dt;
  }
  return num / den;
}

double fit_decay_rate(const RunRecord& record) {
  const auto v = record.total_variance();
  return fit_decay_rate(record.times, v);
}

}  // namespace cbomm
