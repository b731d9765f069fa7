#include <cmath>
#include <limits>
#include <random>

#include "cbomm/consensus.hpp"
#include "cbomm/errors.hpp"
#include "doctest.h"

using namespace cbomm;

namespace {

ParticleMatrix col(std::initializer_list<double> v) { return ParticleMatrix::column(std::vector<double>(v)); }

}  // namespace

TEST_CASE("stable weights normalize and survive huge exponents") {
  const std::vector<double> e{1e6, 1e6 - 1.0, -1e9};
  const auto w = stable_weights(e);
  CHECK(w[0] + w[1] + w[2] == doctest::Approx(1.0));
  CHECK(w[0] / w[1] == doctest::Approx(std::exp(1.0)));
  CHECK(w[2] == 0.0);
}

TEST_CASE("stable weights reject non-finite and empty input") {
  const std::vector<double> bad{0.0, std::numeric_limits<double>::quiet_NaN()};
  try {
    stable_weights(bad);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.index() == 1);
  }
  CHECK_THROWS_AS(stable_weights(std::vector<double>{}), InputError);
}

TEST_CASE("y consensus examples") {
  const Objective bilinear = make_benchmark(BenchmarkId::Bilinear);
  const Vector x{1.0};
  SUBCASE("single particle") {
    CHECK(y_consensus(bilinear, col({0.7}), x, 123.0) == Vector{0.7});
  }
  SUBCASE("beta = 0 gives the arithmetic mean") {
    CHECK(y_consensus(bilinear, col({-1.0, 0.0, 4.0}), x, 0.0)[0] == doctest::Approx(1.0));
  }
  SUBCASE("large beta selects the argmax") {
    CHECK(y_consensus(bilinear, col({-1.0, 0.0, 2.0}), x, 1e6)[0] == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("empty ensemble") {
    CHECK_THROWS_AS(y_consensus(bilinear, ParticleMatrix(0, 1), x, 1.0), InputError);
  }
}

TEST_CASE("x consensus examples") {
  const Objective bilinear = make_benchmark(BenchmarkId::Bilinear);
  SUBCASE("single particle") {
    CHECK(x_consensus(bilinear, col({-0.3}), col({0.5}), 1e4, 1e4) == Vector{-0.3});
  }
  SUBCASE("alpha = 0 gives the mean regardless of beta") {
    for (double beta : {0.0, 1.0, 1e6}) {
      CHECK(x_consensus(bilinear, col({-1.0, 0.5, 2.0}), col({-1.0, 1.0}), 0.0, beta)[0] ==
            doctest::Approx(0.5));
    }
  }
  SUBCASE("large alpha and beta select min_i max_j") {
    CHECK(x_consensus(bilinear, col({-1.0, 0.01, 1.0}), col({-1.0, 1.0}), 1e6, 1e6)[0] ==
          doctest::Approx(0.01).epsilon(1e-6));
  }
}

TEST_CASE("payoff matrix is cached and evaluations are counted once per pair") {
  const Objective obj = make_benchmark(BenchmarkId::Forsaken);
  const auto xs = col({-0.5, 0.1, 0.9});
  const auto ys = col({-1.0, 0.3, 1.2, 1.4});
  obj.reset_evaluations();
  const ConsensusResult r = compute_consensus(obj, xs, ys, {});
  CHECK(obj.evaluations() == 3 * 4 + 3);
  CHECK(r.payoff_at(2, 1) == evaluate(obj, 0.9, 0.3));
  CHECK(r.y_cons.rows() == 3);
  CHECK(r.outer_values.size() == 3);
}

TEST_CASE("consensus points lie in the hull for random ensembles") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const Objective obj = make_benchmark(BenchmarkId::BilinearlyCoupled);
  for (int rep = 0; rep < 200; ++rep) {
    ParticleMatrix xs(7, 1), ys(7, 1);
    for (std::size_t i = 0; i < 7; ++i) {
      xs(i, 0) = u(rng);
      ys(i, 0) = u(rng);
    }
    const auto r = compute_consensus(obj, xs, ys, {1e4, 1e4});
    double lo = xs(0, 0), hi = xs(0, 0);
    for (std::size_t i = 0; i < 7; ++i) {
      lo = std::min(lo, xs(i, 0));
      hi = std::max(hi, xs(i, 0));
    }
    CHECK(r.x_cons[0] >= lo);
    CHECK(r.x_cons[0] <= hi);
  }
}

TEST_CASE("consensus is invariant to adding a constant to E") {
  const Objective base = make_benchmark(BenchmarkId::Forsaken);
  const Objective shifted("shifted", base.domain_x(), base.domain_y(),
                          [base](std::span<const double> x, std::span<const double> y) {
                            return base.evaluate_raw(x, y) + 3.5;
                          });
  const auto xs = col({-1.2, -0.1, 0.4, 1.3});
  const auto ys = col({-1.4, -0.2, 0.6, 1.1});
  const auto a = compute_consensus(base, xs, ys, {50.0, 50.0});
  const auto b = compute_consensus(shifted, xs, ys, {50.0, 50.0});
  CHECK(a.x_cons[0] == doctest::Approx(b.x_cons[0]).epsilon(1e-10));
  for (std::size_t i = 0; i < 4; ++i) CHECK(a.y_cons(i, 0) == doctest::Approx(b.y_cons(i, 0)).epsilon(1e-10));
}

TEST_CASE("consensus reports the particle index of a non-finite value") {
  const Objective nan_at_half("nan", BoxDomain::cube(1, -1, 1), BoxDomain::cube(1, -1, 1),
                              [](std::span<const double> x, std::span<const double> y) {
                                return y[0] == 0.5 ? std::numeric_limits<double>::quiet_NaN() : x[0] * y[0];
                              });
  try {
    compute_consensus(nan_at_half, col({0.2}), col({0.0, 0.1, 0.5}), {});
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.index() == 2);
  }
}

TEST_CASE("laplace gap examples") {
  const std::vector<double> constant{2.0, 2.0, 2.0};
  CHECK(laplace_gap(constant, 7.0, Extremum::Min) == doctest::Approx(0.0));
  CHECK(laplace_gap(constant, 7.0, Extremum::Max) == doctest::Approx(0.0));
  const std::vector<double> two{0.0, 1.0};
  CHECK(laplace_gap(two, std::log(2.0), Extremum::Min) == doctest::Approx(std::log2(4.0 / 3.0)));
  CHECK(laplace_gap(two, std::log(2.0), Extremum::Min) == doctest::Approx(0.415).epsilon(1e-3));
  CHECK_THROWS_AS(laplace_gap(two, 0.0, Extremum::Min), InputError);
}

TEST_CASE("laplace gap shrinks as the parameter grows") {
  const std::vector<double> values{0.3, -1.0, 2.0, 0.7, -0.9};
  for (Extremum mode : {Extremum::Min, Extremum::Max}) {
    double previous = std::numeric_limits<double>::infinity();
    for (double p : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
      const double gap = laplace_gap(values, p, mode);
      CHECK(gap <= previous);
      previous = gap;
    }
    CHECK(previous < 1e-2);
  }
}
