#include "cbomm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cbomm/errors.hpp"

namespace cbomm {

namespace {

constexpr double kTieTolerance = 1e-6;

void check_grid(const BoxDomain& box, const GridSpec& grid, const char* which) {
  if (!box.bounded()) throw InputError(std::string("oracle: ") + which + " domain must be bounded");
  if (box.dim() > 2) throw InputError(std::string("oracle: ") + which + " dimension > 2 is not supported");
  if (grid.points_per_dim < 3) throw InputError("oracle: need at least 3 grid points per dimension");
}

// Row-major tensor grid over a box with m points per dimension.
class TensorGrid {
 public:
  TensorGrid(Vector lower, Vector upper, std::size_t m) : lower_(std::move(lower)), upper_(std::move(upper)), m_(m) {
    step_.resize(lower_.size());
    for (std::size_t k = 0; k < lower_.size(); ++k) step_[k] = (upper_[k] - lower_[k]) / static_cast<double>(m_ - 1);
    total_ = 1;
    for (std::size_t k = 0; k < lower_.size(); ++k) total_ *= m_;
  }

  std::size_t size() const noexcept { return total_; }
  std::size_t dim() const noexcept { return lower_.size(); }
  std::size_t points_per_dim() const noexcept { return m_; }
  double spacing() const noexcept { return *std::max_element(step_.begin(), step_.end()); }

  void point(std::size_t index, std::span<double> out) const {
    for (std::size_t k = dim(); k-- > 0;) {
      const std::size_t c = index % m_;
      index /= m_;
      // Pin the last node to the bound so the grid never leaves the box.
      out[k] = c + 1 == m_ ? upper_[k] : lower_[k] + static_cast<double>(c) * step_[k];
    }
  }

  // Box of 1/4 the current width around `center`, clipped to `domain`.
  TensorGrid refined(std::span<const double> center, const BoxDomain& domain) const {
    Vector lo(dim()), hi(dim());
    for (std::size_t k = 0; k < dim(); ++k) {
      const double half = (upper_[k] - lower_[k]) / 8.0;
      lo[k] = std::max(domain.lower()[k], center[k] - half);
      hi[k] = std::min(domain.upper()[k], center[k] + half);
    }
    return TensorGrid(std::move(lo), std::move(hi), m_);
  }

 private:
  Vector lower_, upper_, step_;
  std::size_t m_;
  std::size_t total_ = 0;
};

struct GridMax {
  double value;
  Vector arg;
};

// Refines a grid maximum of E(x, .) for `rounds` rounds starting from `seed`.
GridMax refine_y(const Objective& obj, std::span<const double> x, const TensorGrid& start, GridMax seed,
                 const BoxDomain& domain, std::size_t rounds) {
  TensorGrid grid = start;
  Vector y(grid.dim());
  for (std::size_t r = 0; r < rounds; ++r) {
    grid = grid.refined(seed.arg, domain);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      grid.point(j, y);
      const double v = obj.evaluate_raw(x, y);
      if (v > seed.value) seed = {v, y};
    }
    obj.add_evaluations(grid.size());
  }
  return seed;
}

// Connected components of {j : values[j] >= threshold}, where points closer
// than 3 cells (l-infinity) belong together. Components are ordered by their
// lowest grid index.
std::vector<std::vector<std::size_t>> near_tie_clusters(const TensorGrid& grid, const std::vector<double>& values,
                                                        double threshold) {
  const std::size_t m = grid.points_per_dim();
  const std::size_t d = grid.dim();
  std::vector<char> seen(values.size(), 0);
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t start = 0; start < values.size(); ++start) {
    if (seen[start] || values[start] < threshold) continue;
    std::vector<std::size_t> members;
    std::vector<std::size_t> frontier{start};
    seen[start] = 1;
    while (!frontier.empty()) {
      const std::size_t cur = frontier.back();
      frontier.pop_back();
      members.push_back(cur);
      const std::size_t c0 = d == 2 ? cur / m : 0;
      const std::size_t c1 = cur % m;
      for (long a = d == 2 ? -2 : 0; a <= (d == 2 ? 2 : 0); ++a) {
        for (long b = -2; b <= 2; ++b) {
          const long n0 = static_cast<long>(c0) + a;
          const long n1 = static_cast<long>(c1) + b;
          if (n0 < 0 || n1 < 0 || n0 >= static_cast<long>(m) || n1 >= static_cast<long>(m)) continue;
          const std::size_t nb = static_cast<std::size_t>(n0) * m + static_cast<std::size_t>(n1);
          if (seen[nb] || values[nb] < threshold) continue;
          seen[nb] = 1;
          frontier.push_back(nb);
        }
      }
    }
    std::sort(members.begin(), members.end());
    clusters.push_back(std::move(members));
  }
  return clusters;
}

EnvelopeValue envelope_impl(const Objective& obj, std::span<const double> x, const BoxDomain& dy,
                            const GridSpec& grid) {
  const TensorGrid coarse(dy.lower(), dy.upper(), grid.points_per_dim);
  Vector y(coarse.dim());
  GridMax best{-std::numeric_limits<double>::infinity(), Vector(coarse.dim())};
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    coarse.point(j, y);
    const double v = obj.evaluate_raw(x, y);
    if (!std::isfinite(v)) throw NumericalError("oracle: non-finite objective value", j);
    if (v > best.value) best = {v, y};
  }
  obj.add_evaluations(coarse.size());
  best = refine_y(obj, x, coarse, std::move(best), dy, grid.refine_rounds);
  return {best.value, std::move(best.arg)};
}

}  // namespace

EnvelopeValue envelope(const Objective& obj, std::span<const double> x, const GridSpec& grid) {
  const BoxDomain dy = grid.domain_y.value_or(obj.domain_y());
  check_grid(dy, grid, "y");
  if (x.size() != obj.dim_x() || dy.dim() != obj.dim_y()) throw InputError("envelope: dimension mismatch");
  return envelope_impl(obj, x, dy, grid);
}

OracleSolution solve_minmax(const Objective& obj, const GridSpec& grid) {
  const BoxDomain dx = grid.domain_x.value_or(obj.domain_x());
  const BoxDomain dy = grid.domain_y.value_or(obj.domain_y());
  check_grid(dx, grid, "x");
  check_grid(dy, grid, "y");
  if (dx.dim() != obj.dim_x() || dy.dim() != obj.dim_y()) throw InputError("solve_minmax: dimension mismatch");

  OracleSolution sol;
  TensorGrid xgrid(dx.lower(), dx.upper(), grid.points_per_dim);
  Vector x(xgrid.dim());
  Vector best_x(xgrid.dim());
  double best_value = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < xgrid.size(); ++i) {
    xgrid.point(i, x);
    const double v = envelope_impl(obj, x, dy, grid).value;
    sol.envelope_samples.emplace_back(x, v);
    if (v < best_value) {
      best_value = v;
      best_x = x;
    }
  }
  sol.round_values.push_back(best_value);
  for (std::size_t r = 0; r < grid.refine_rounds; ++r) {
    xgrid = xgrid.refined(best_x, dx);
    for (std::size_t i = 0; i < xgrid.size(); ++i) {
      xgrid.point(i, x);
      const double v = envelope_impl(obj, x, dy, grid).value;
      if (v < best_value) {
        best_value = v;
        best_x = x;
      }
    }
    sol.round_values.push_back(best_value);
  }
  sol.resolution = xgrid.spacing();

  // Maximizers at x*: cluster coarse-grid near-ties, refine each cluster.
  const TensorGrid ygrid(dy.lower(), dy.upper(), grid.points_per_dim);
  std::vector<double> values(ygrid.size());
  Vector y(ygrid.dim());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ygrid.size(); ++j) {
    ygrid.point(j, y);
    values[j] = obj.evaluate_raw(best_x, y);
    top = std::max(top, values[j]);
  }
  obj.add_evaluations(ygrid.size());

  const auto clusters = near_tie_clusters(ygrid, values, top - kTieTolerance);

  std::vector<GridMax> refined;
  for (const auto& c : clusters) {
    std::size_t arg = c.front();
    for (std::size_t j : c) {
      if (values[j] > values[arg]) arg = j;
    }
    GridMax seed{values[arg], Vector(ygrid.dim())};
    ygrid.point(arg, seed.arg);
    refined.push_back(refine_y(obj, best_x, ygrid, std::move(seed), dy, grid.refine_rounds));
  }
  double refined_top = -std::numeric_limits<double>::infinity();
  for (const auto& g : refined) refined_top = std::max(refined_top, g.value);
  for (const auto& g : refined) {
    if (g.value >= refined_top - kTieTolerance) sol.y_star_all.push_back(g.arg);
  }

  const EnvelopeValue at_star = envelope_impl(obj, best_x, dy, grid);
  sol.x_star = best_x;
  sol.y_star = at_star.argmax;
  sol.value = at_star.value;
  if (sol.y_star_all.empty()) sol.y_star_all.push_back(sol.y_star);
  return sol;
}

}  // namespace cbomm
