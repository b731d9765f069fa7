#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cbomm/objective.hpp"

namespace cbomm {

/// Tensor grid with points_per_dim samples per coordinate. Each refinement
/// round re-grids a box of 1/4 the previous width (per dimension) centred on
/// the incumbent and clipped to the domain.
struct GridSpec {
  std::size_t points_per_dim = 2049;
  std::size_t refine_rounds = 3;
  /// Defaults to the objective's boxes.
  std::optional<BoxDomain> domain_x;
  std::optional<BoxDomain> domain_y;
};

struct EnvelopeValue {
  double value;  ///< max_y E(x, y) over the refined grid
  Vector argmax;
};

struct OracleSolution {
  Vector x_star;
  Vector y_star;
  /// Every maximizer of E(x*, .) found, one per cluster, in grid order.
  std::vector<Vector> y_star_all;
  double value = 0.0;  ///< upper envelope at x*
  std::vector<std::pair<Vector, double>> envelope_samples;  ///< coarse x grid
  double resolution = 0.0;                                  ///< final x grid spacing
  std::vector<double> round_values;                         ///< incumbent envelope after each x round
};

/// Upper envelope max_y E(x, .) by grid search with refinement; ties go to
/// the lowest grid index. Throws InputError for unbounded boxes, dims > 2 or
/// fewer than 3 points per dimension.
EnvelopeValue envelope(const Objective& obj, std::span<const double> x, const GridSpec& grid = {});

/// Global min-max point: x* minimizes the envelope, y* maximizes E(x*, .).
OracleSolution solve_minmax(const Objective& obj, const GridSpec& grid = {});

}  // namespace cbomm
