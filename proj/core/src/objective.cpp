#include "cbomm/objective.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cbomm/errors.hpp"

namespace cbomm {

BoxDomain::BoxDomain(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw InputError("BoxDomain: dimension must be at least 1");
  if (lower_.size() != upper_.size()) throw InputError("BoxDomain: lower/upper dimension mismatch");
  for (std::size_t k = 0; k < lower_.size(); ++k) {
    if (std::isnan(lower_[k]) || std::isnan(upper_[k]) || !(lower_[k] < upper_[k])) {
      throw InputError("BoxDomain: need lower < upper in coordinate " + std::to_string(k));
    }
  }
}

BoxDomain BoxDomain::cube(std::size_t dim, double lower, double upper) {
  return BoxDomain(Vector(dim, lower), Vector(dim, upper));
}

bool BoxDomain::bounded() const noexcept {
  return std::all_of(lower_.begin(), lower_.end(), [](double v) { return std::isfinite(v); }) &&
         std::all_of(upper_.begin(), upper_.end(), [](double v) { return std::isfinite(v); });
}

bool BoxDomain::contains(std::span<const double> z) const noexcept {
  if (z.size() != dim()) return false;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (!(z[k] >= lower_[k] && z[k] <= upper_[k])) return false;
  }
  return true;
}

void BoxDomain::clamp(std::span<double> z) const noexcept {
  for (std::size_t k = 0; k < z.size() && k < dim(); ++k) {
    z[k] = std::clamp(z[k], lower_[k], upper_[k]);
  }
}

std::string_view benchmark_name(BenchmarkId id) noexcept {
  switch (id) {
    case BenchmarkId::Bilinear: return "bilinear";
    case BenchmarkId::Bivariate: return "bivariate";
    case BenchmarkId::BilinearlyCoupled: return "bilinearly_coupled";
    case BenchmarkId::Forsaken: return "forsaken";
    case BenchmarkId::SixthOrder: return "sixth_order";
    case BenchmarkId::RemarkFunction: return "remark_function";
  }
  return "unknown";
}

std::optional<BenchmarkId> parse_benchmark(std::string_view name) {
  for (BenchmarkId id : kAllBenchmarks) {
    if (benchmark_name(id) == name) return id;
  }
  if (name == "A" || name == "a") return BenchmarkId::BilinearlyCoupled;
  if (name == "B" || name == "b") return BenchmarkId::Forsaken;
  if (name == "C" || name == "c") return BenchmarkId::SixthOrder;
  return std::nullopt;
}

Objective::Objective(std::string name, BoxDomain domain_x, BoxDomain domain_y, Fn fn)
    : name_(std::move(name)),
      domain_x_(std::move(domain_x)),
      domain_y_(std::move(domain_y)),
      fn_(std::make_shared<const Fn>(std::move(fn))) {
  if (!*fn_) throw InputError("Objective: empty evaluation function");
}

Objective::Objective(const Objective& other)
    : name_(other.name_), domain_x_(other.domain_x_), domain_y_(other.domain_y_), fn_(other.fn_) {}

Objective& Objective::operator=(const Objective& other) {
  if (this != &other) {
    name_ = other.name_;
    domain_x_ = other.domain_x_;
    domain_y_ = other.domain_y_;
    fn_ = other.fn_;
    reset_evaluations();
  }
  return *this;
}

Objective::Objective(Objective&& other) noexcept
    : name_(std::move(other.name_)),
      domain_x_(std::move(other.domain_x_)),
      domain_y_(std::move(other.domain_y_)),
      fn_(std::move(other.fn_)),
      evaluations_(other.evaluations()) {}

Objective& Objective::operator=(Objective&& other) noexcept {
  if (this != &other) {
    name_ = std::move(other.name_);
    domain_x_ = std::move(other.domain_x_);
    domain_y_ = std::move(other.domain_y_);
    fn_ = std::move(other.fn_);
    evaluations_.store(other.evaluations(), std::memory_order_relaxed);
  }
  return *this;
}

double Objective::evaluate(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != dim_x() || y.size() != dim_y()) {
    throw InputError("Objective '" + name_ + "': expected dims (" + std::to_string(dim_x()) + ", " +
                     std::to_string(dim_y()) + "), got (" + std::to_string(x.size()) + ", " +
                     std::to_string(y.size()) + ")");
  }
  add_evaluations(1);
  return (*fn_)(x, y);
}

Objective Objective::with_domains(BoxDomain domain_x, BoxDomain domain_y) const {
  if (domain_x.dim() != dim_x() || domain_y.dim() != dim_y()) {
    throw InputError("Objective::with_domains: dimension change is not allowed");
  }
  Objective copy(*this);
  copy.domain_x_ = std::move(domain_x);
  copy.domain_y_ = std::move(domain_y);
  return copy;
}

namespace formulas {

double coupled_quartic(double z) noexcept { return (z + 1.0) * (z - 1.0) * (z + 3.0) * (z - 3.0); }

double forsaken_phi(double z) noexcept {
  const double z2 = z * z;
  return z2 / 4.0 - z2 * z2 / 2.0 + z2 * z2 * z2 / 6.0;
}

double bilinear(double x, double y) noexcept { return x * y; }

double bivariate(double x, double y) noexcept {
  const double x2 = x * x;
  return x2 * x2 / 4.0 - x2 / 2.0 + x * y;
}

double bilinearly_coupled(double x, double y) noexcept {
  constexpr double kCoupling = 10.0;
  return coupled_quartic(x) + kCoupling * x * y - coupled_quartic(y);
}

double forsaken(double x, double y) noexcept { return x * (y - 0.45) + forsaken_phi(x) - forsaken_phi(y); }

double sixth_order(double x, double y) noexcept {
  const double inner = y - 3.0 * x + 0.05 * x * x * x;
  const double y2 = y * y;
  return (4.0 * x * x - inner * inner - 0.1 * y2 * y2) * std::exp(-0.01 * (x * x + y2));
}

// Nonsmooth (|tanh x|), nonconvex-nonconcave, global min-max point (0, 0).
double remark_function(double x, double y) noexcept {
  const double s = std::sin(x);
  const double r = 1.0 + x * x;
  const double a = y - s / r;
  const double b = y - s / (r * r);
  return -(a * a) / (1.0 + b * b) + std::abs(std::tanh(x)) / (1.0 + s * s);
}

}  // namespace formulas

namespace {

using ScalarFormula = double (*)(double, double) noexcept;

Objective scalar_objective(std::string_view name, double lo, double hi, ScalarFormula f) {
  return Objective(std::string(name), BoxDomain::cube(1, lo, hi), BoxDomain::cube(1, lo, hi),
                   [f](std::span<const double> x, std::span<const double> y) { return f(x[0], y[0]); });
}

}  // namespace

Objective make_benchmark(BenchmarkId id) {
  const auto name = benchmark_name(id);
  switch (id) {
    // Stated on R x R; [-4, 4]^2 is the working box.
    case BenchmarkId::Bilinear: return scalar_objective(name, -4.0, 4.0, formulas::bilinear);
    case BenchmarkId::Bivariate: return scalar_objective(name, -4.0, 4.0, formulas::bivariate);
    case BenchmarkId::BilinearlyCoupled:
      return scalar_objective(name, -4.0, 4.0, formulas::bilinearly_coupled);
    case BenchmarkId::Forsaken: return scalar_objective(name, -1.5, 1.5, formulas::forsaken);
    case BenchmarkId::SixthOrder: return scalar_objective(name, -2.0, 2.0, formulas::sixth_order);
    case BenchmarkId::RemarkFunction: return scalar_objective(name, -4.0, 4.0, formulas::remark_function);
  }
  throw InputError("make_benchmark: unknown id");
}

}  // namespace cbomm
