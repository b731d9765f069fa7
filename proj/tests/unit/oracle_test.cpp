#include <cmath>

#include "cbomm/errors.hpp"
#include "cbomm/harness.hpp"
#include "cbomm/oracle.hpp"
#include "doctest.h"

using namespace cbomm;

TEST_CASE("envelope examples") {
  const Vector one{1.0}, zero{0.0};
  SUBCASE("bilinear is monotone in y") {
    const EnvelopeValue ev = envelope(make_benchmark(BenchmarkId::Bilinear), one);
    CHECK(ev.value == doctest::Approx(4.0));
    CHECK(ev.argmax == Vector{4.0});
  }
  SUBCASE("bivariate ties resolve to the lowest grid index") {
    const EnvelopeValue ev = envelope(make_benchmark(BenchmarkId::Bivariate), zero);
    CHECK(ev.value == 0.0);
    CHECK(ev.argmax == Vector{-4.0});
  }
  SUBCASE("forsaken at x = 0") {
    // phi takes negative values, so the envelope at 0 is max_y -phi(y) > 0,
    // attained at y = +-1.3066.
    GridSpec g;
    g.points_per_dim = 4097;
    const EnvelopeValue ev = envelope(make_benchmark(BenchmarkId::Forsaken), zero, g);
    CHECK(ev.value == doctest::Approx(0.2012).epsilon(1e-3));
    CHECK(std::abs(std::abs(ev.argmax[0]) - 1.3066) < 1e-3);
  }
}

TEST_CASE("oracle solutions of the three problems") {
  struct Case {
    BenchmarkId id;
    double y_abs;
  };
  for (const Case& c : {Case{BenchmarkId::BilinearlyCoupled, 2.24}, Case{BenchmarkId::Forsaken, 1.31},
                        Case{BenchmarkId::SixthOrder, 0.0}}) {
    CAPTURE(benchmark_name(c.id));
    const OracleSolution s = solve_minmax(make_benchmark(c.id), reference_grid());
    CHECK(std::abs(s.x_star[0]) < 0.01);
    CHECK(std::abs(std::abs(s.y_star[0]) - c.y_abs) < 0.02);
    CHECK(s.y_star_all.size() == (c.y_abs > 0.0 ? 2u : 1u));
    for (std::size_t r = 1; r < s.round_values.size(); ++r) CHECK(s.round_values[r] <= s.round_values[r - 1]);
  }
}

TEST_CASE("oracle rejects bad grids") {
  GridSpec g;
  g.points_per_dim = 2;
  CHECK_THROWS_AS(solve_minmax(make_benchmark(BenchmarkId::Bilinear), g), InputError);
  const Objective three_d("cube", BoxDomain::cube(3, -1, 1), BoxDomain::cube(1, -1, 1),
                          [](std::span<const double> x, std::span<const double> y) { return x[0] * y[0]; });
  CHECK_THROWS_AS(solve_minmax(three_d), InputError);
}

TEST_CASE("reference points come from the oracle") {
  const ReferencePoint a = reference_point(BenchmarkId::BilinearlyCoupled);
  CHECK(a.y_star_set.size() == 2);
  CHECK(std::abs(std::abs(a.y_star_set[0][0]) - 2.236) < 1e-3);
  CHECK(reference_point(BenchmarkId::Bilinear).y_free);
  CHECK(reference_point(BenchmarkId::Bivariate).y_free);
  CHECK_FALSE(reference_point(BenchmarkId::RemarkFunction).y_free);
}
