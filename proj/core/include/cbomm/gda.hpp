#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cbomm/objective.hpp"

namespace cbomm {

enum class GdaMode { Simultaneous, Alternating };

struct GdaConfig {
  double step_size = 0.1;
  GdaMode mode = GdaMode::Simultaneous;
  std::size_t iterations = 100;
  Vector start_x;
  Vector start_y;
};

struct GdaTrajectory {
  /// Iterates including the start; iterations + 1 entries unless halted.
  std::vector<std::pair<Vector, Vector>> points;
  /// Set when an iterate left the ball of radius 1e6 and the run stopped.
  bool diverged = false;
  std::optional<std::size_t> halted_at;
};

inline constexpr double kGdaDivergenceRadius = 1e6;

/// Central differences with h = 1e-6 max(1, |z_k|) in each coordinate.
Vector finite_difference_grad_x(const Objective& obj, std::span<const double> x, std::span<const double> y);
Vector finite_difference_grad_y(const Objective& obj, std::span<const double> x, std::span<const double> y);

/// Gradient descent in x, ascent in y, no projection. Throws NumericalError
/// on a non-finite iterate and InputError on an invalid config.
GdaTrajectory gda_run(const Objective& obj, const GdaConfig& config);

}  // namespace cbomm
