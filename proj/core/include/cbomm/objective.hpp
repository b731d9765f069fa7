#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cbomm {

using Vector = std::vector<double>;

/// Axis-aligned box lower <= z <= upper. Infinite bounds are allowed (the
/// whole real line), but then the box is not `bounded()`.
class BoxDomain {
 public:
  BoxDomain(Vector lower, Vector upper);

  static BoxDomain cube(std::size_t dim, double lower, double upper);

  std::size_t dim() const noexcept { return lower_.size(); }
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }

  bool bounded() const noexcept;
  bool contains(std::span<const double> z) const noexcept;
  void clamp(std::span<double> z) const noexcept;

  friend bool operator==(const BoxDomain&, const BoxDomain&) = default;

 private:
  Vector lower_;
  Vector upper_;
};

enum class BenchmarkId {
  Bilinear,
  Bivariate,
  BilinearlyCoupled,
  Forsaken,
  SixthOrder,
  RemarkFunction,
};

inline constexpr BenchmarkId kAllBenchmarks[] = {
    BenchmarkId::Bilinear,   BenchmarkId::Bivariate,  BenchmarkId::BilinearlyCoupled,
    BenchmarkId::Forsaken,   BenchmarkId::SixthOrder, BenchmarkId::RemarkFunction,
};

/// snake_case CLI/config name, e.g. "bilinearly_coupled".
std::string_view benchmark_name(BenchmarkId id) noexcept;
/// Accepts the snake_case name plus the aliases "A", "B", "C" for the three
/// nonconvex-nonconcave problems.
std::optional<BenchmarkId> parse_benchmark(std::string_view name);

/// An objective E(x, y) on domain_x x domain_y, to be minimized in x and
/// maximized in y.
///
/// The formula is immutable and shared between copies. Every handle owns its
/// own evaluation counter; copying a handle yields a fresh counter at zero, so
/// concurrent runs that each copy the objective never contend on it.
class Objective {
 public:
  using Fn = std::function<double(std::span<const double> x, std::span<const double> y)>;

  Objective(std::string name, BoxDomain domain_x, BoxDomain domain_y, Fn fn);

  Objective(const Objective& other);
  Objective& operator=(const Objective& other);
  Objective(Objective&& other) noexcept;
  Objective& operator=(Objective&& other) noexcept;
  ~Objective() = default;

  const std::string& name() const noexcept { return name_; }
  std::size_t dim_x() const noexcept { return domain_x_.dim(); }
  std::size_t dim_y() const noexcept { return domain_y_.dim(); }
  const BoxDomain& domain_x() const noexcept { return domain_x_; }
  const BoxDomain& domain_y() const noexcept { return domain_y_; }

  /// Checked, counted evaluation. Throws InputError on dimension mismatch.
  double evaluate(std::span<const double> x, std::span<const double> y) const;

  /// Uncounted, unchecked evaluation for bulk loops that account for their
  /// evaluations through add_evaluations().
  double evaluate_raw(std::span<const double> x, std::span<const double> y) const {
    return (*fn_)(x, y);
  }

  void add_evaluations(std::uint64_t n) const noexcept {
    evaluations_.fetch_add(n, std::memory_order_relaxed);
  }
  std::uint64_t evaluations() const noexcept {
    return evaluations_.load(std::memory_order_relaxed);
  }
  void reset_evaluations() const noexcept { evaluations_.store(0, std::memory_order_relaxed); }

  /// Same formula on different boxes.
  Objective with_domains(BoxDomain domain_x, BoxDomain domain_y) const;

 private:
  std::string name_;
  BoxDomain domain_x_;
  BoxDomain domain_y_;
  std::shared_ptr<const Fn> fn_;
  mutable std::atomic<std::uint64_t> evaluations_{0};
};

/// Convenience for scalar problems.
inline double evaluate(const Objective& obj, double x, double y) {
  return obj.evaluate(std::span<const double>(&x, 1), std::span<const double>(&y, 1));
}

Objective make_benchmark(BenchmarkId id);

namespace formulas {

/// (z+1)(z-1)(z+3)(z-3), the separable part of the bilinearly coupled problem.
double coupled_quartic(double z) noexcept;
/// z^2/4 - z^4/2 + z^6/6, the separable part of the Forsaken problem.
double forsaken_phi(double z) noexcept;

double bilinear(double x, double y) noexcept;
double bivariate(double x, double y) noexcept;
double bilinearly_coupled(double x, double y) noexcept;
double forsaken(double x, double y) noexcept;
double sixth_order(double x, double y) noexcept;
double remark_function(double x, double y) noexcept;

/// The point often quoted for Forsaken in the literature. It is a stationary
/// point of gradient dynamics, not the global min-max solution.
inline constexpr double kForsakenLiteraturePoint[2] = {0.08, 0.4};

}  // namespace formulas

}  // namespace cbomm
