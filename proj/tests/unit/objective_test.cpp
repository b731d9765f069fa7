#include <cmath>
#include <limits>

#include "cbomm/errors.hpp"
#include "cbomm/objective.hpp"
#include "doctest.h"

using namespace cbomm;

TEST_CASE("benchmark values at known points") {
  CHECK(evaluate(make_benchmark(BenchmarkId::Bilinear), 2.0, 3.0) == 6.0);
  CHECK(evaluate(make_benchmark(BenchmarkId::BilinearlyCoupled), 0.0, 0.0) == 0.0);
  CHECK(evaluate(make_benchmark(BenchmarkId::Forsaken), 0.0, 0.0) == 0.0);
  CHECK(evaluate(make_benchmark(BenchmarkId::Bivariate), 1.0, 0.0) == doctest::Approx(-0.25));
  CHECK(evaluate(make_benchmark(BenchmarkId::Bivariate), 0.0, 7.0) == 0.0);
  CHECK(evaluate(make_benchmark(BenchmarkId::SixthOrder), 0.0, 0.0) == 0.0);
  CHECK(evaluate(make_benchmark(BenchmarkId::RemarkFunction), 0.0, 0.0) == 0.0);
}

TEST_CASE("bilinearly coupled problem is f(x) + 10xy - f(y)") {
  for (double x : {-1.3, 0.2, 1.7}) {
    for (double y : {-2.0, 0.5, 2.24}) {
      CHECK(formulas::bilinearly_coupled(x, y) ==
            doctest::Approx(formulas::coupled_quartic(x) + 10.0 * x * y - formulas::coupled_quartic(y)));
    }
  }
  CHECK(formulas::coupled_quartic(0.0) == 9.0);
}

TEST_CASE("forsaken phi vanishes at zero and is negative near the maximizers") {
  CHECK(formulas::forsaken_phi(0.0) == 0.0);
  CHECK(formulas::forsaken_phi(1.3) < 0.0);
}

TEST_CASE("benchmark boxes") {
  CHECK(make_benchmark(BenchmarkId::Bilinear).domain_x() == BoxDomain::cube(1, -4.0, 4.0));
  CHECK(make_benchmark(BenchmarkId::BilinearlyCoupled).domain_y() == BoxDomain::cube(1, -4.0, 4.0));
  CHECK(make_benchmark(BenchmarkId::Forsaken).domain_x() == BoxDomain::cube(1, -1.5, 1.5));
  CHECK(make_benchmark(BenchmarkId::SixthOrder).domain_y() == BoxDomain::cube(1, -2.0, 2.0));
}

TEST_CASE("benchmark names round-trip and problem letters parse") {
  for (BenchmarkId id : kAllBenchmarks) CHECK(parse_benchmark(benchmark_name(id)) == id);
  CHECK(parse_benchmark("A") == BenchmarkId::BilinearlyCoupled);
  CHECK(parse_benchmark("B") == BenchmarkId::Forsaken);
  CHECK(parse_benchmark("C") == BenchmarkId::SixthOrder);
  CHECK_FALSE(parse_benchmark("rosenbrock").has_value());
}

TEST_CASE("evaluation is deterministic and counted") {
  const Objective obj = make_benchmark(BenchmarkId::Forsaken);
  const double a = evaluate(obj, 0.3, -0.7);
  CHECK(evaluate(obj, 0.3, -0.7) == a);
  CHECK(obj.evaluations() == 2);
  const Objective copy = obj;
  CHECK(copy.evaluations() == 0);
  obj.reset_evaluations();
  CHECK(obj.evaluations() == 0);
}

TEST_CASE("dimension mismatch is an input error") {
  const Objective obj = make_benchmark(BenchmarkId::Bilinear);
  const Vector x{1.0, 2.0};
  const Vector y{1.0};
  CHECK_THROWS_AS(obj.evaluate(x, y), InputError);
}

TEST_CASE("box domain validation and clamping") {
  CHECK_THROWS_AS(BoxDomain({1.0}, {0.0}), InputError);
  CHECK_THROWS_AS(BoxDomain({}, {}), InputError);
  const BoxDomain box = BoxDomain::cube(2, -1.0, 1.0);
  Vector p{2.0, -0.5};
  CHECK_FALSE(box.contains(p));
  box.clamp(p);
  CHECK(p == Vector{1.0, -0.5});
  CHECK(box.contains(p));
  CHECK(box.bounded());
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_FALSE(BoxDomain({-inf}, {inf}).bounded());
}

TEST_CASE("benchmarks are finite on their boxes") {
  for (BenchmarkId id : kAllBenchmarks) {
    const Objective obj = make_benchmark(id);
    const double lo = obj.domain_x().lower()[0], hi = obj.domain_x().upper()[0];
    for (int a = 0; a <= 20; ++a) {
      for (int b = 0; b <= 20; ++b) {
        const double x = lo + (hi - lo) * a / 20.0;
        const double y = obj.domain_y().lower()[0] + (obj.domain_y().upper()[0] - obj.domain_y().lower()[0]) * b / 20.0;
        CHECK(std::isfinite(evaluate(obj, x, y)));
      }
    }
  }
}
