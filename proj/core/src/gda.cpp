#include "cbomm/gda.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cbomm/errors.hpp"

namespace cbomm {

namespace {

double fd_step(double z) { return 1e-6 * std::max(1.0, std::abs(z)); }

bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double z) { return std::isfinite(z); });
}

double max_abs(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  for (double v : b) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

Vector finite_difference_grad_x(const Objective& obj, std::span<const double> x, std::span<const double> y) {
  Vector probe(x.begin(), x.end());
  Vector g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double h = fd_step(x[k]);
    probe[k] = x[k] + h;
    const double up = obj.evaluate(probe, y);
    probe[k] = x[k] - h;
    const double down = obj.evaluate(probe, y);
    probe[k] = x[k];
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

Vector finite_difference_grad_y(const Objective& obj, std::span<const double> x, std::span<const double> y) {
  Vector probe(y.begin(), y.end());
  Vector g(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double h = fd_step(y[k]);
    probe[k] = y[k] + h;
    const double up = obj.evaluate(x, probe);
    probe[k] = y[k] - h;
    const double down = obj.evaluate(x, probe);
    probe[k] = y[k];
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

GdaTrajectory gda_run(const Objective& obj, const GdaConfig& config) {
  if (!(config.step_size > 0.0) || !std::isfinite(config.step_size)) {
    throw InputError("gda: step size must be positive");
  }
  if (config.start_x.size() != obj.dim_x() || config.start_y.size() != obj.dim_y()) {
    throw InputError("gda: start point dimension mismatch");
  }
  const double eta = config.step_size;
  GdaTrajectory out;
  out.points.reserve(config.iterations + 1);
  Vector x = config.start_x;
  Vector y = config.start_y;
  out.points.emplace_back(x, y);

  for (std::size_t k = 1; k <= config.iterations; ++k) {
    const Vector gx = finite_difference_grad_x(obj, x, y);
    if (config.mode == GdaMode::Simultaneous) {
      const Vector gy = finite_difference_grad_y(obj, x, y);
      for (std::size_t d = 0; d < x.size(); ++d) x[d] -= eta * gx[d];
      for (std::size_t d = 0; d < y.size(); ++d) y[d] += eta * gy[d];
    } else {
      for (std::size_t d = 0; d < x.size(); ++d) x[d] -= eta * gx[d];
      const Vector gy = finite_difference_grad_y(obj, x, y);
      for (std::size_t d = 0; d < y.size(); ++d) y[d] += eta * gy[d];
    }
    if (!all_finite(x) || !all_finite(y)) {
      throw NumericalError("gda: non-finite iterate " + std::to_string(k), k);
    }
    out.points.emplace_back(x, y);
    if (max_abs(x, y) > kGdaDivergenceRadius) {
      out.diverged = true;
      out.halted_at = k;
      break;
    }
  }
  return out;
}

}  // namespace cbomm
