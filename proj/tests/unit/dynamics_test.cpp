#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cbomm/diagnostics.hpp"
#include "cbomm/dynamics.hpp"
#include "cbomm/errors.hpp"
#include "cbomm/harness.hpp"
#include "doctest.h"

using namespace cbomm;

namespace {

ConsensusResult frozen_consensus(Vector x_cons, const ParticleMatrix& y_rows) {
  ConsensusResult c;
  c.x_cons = std::move(x_cons);
  c.y_cons = y_rows;
  return c;
}

Objective plane_2d() {
  return Objective("plane", BoxDomain::cube(2, -10, 10), BoxDomain::cube(2, -10, 10),
                   [](std::span<const double> x, std::span<const double> y) { return x[0] * y[0] + x[1] * y[1]; });
}

}  // namespace

TEST_CASE("uniform box initialization has the expected mean") {
  SolverConfig c;
  c.n_particles = 10000;
  c.seed = 3;
  const Ensemble e = initialize(c, make_benchmark(BenchmarkId::Bilinear));
  const double bound = 3.0 * (8.0 / std::sqrt(12.0)) / std::sqrt(10000.0);
  CHECK(std::abs(mean(e.xs)[0]) < bound);
  CHECK(std::abs(mean(e.ys)[0]) < bound);
  CHECK(e.step_index == 0);
}

TEST_CASE("border initialization places every particle on the boundary") {
  SolverConfig c;
  c.n_particles = 500;
  c.init = InitSpec::border();
  const Ensemble e = initialize(c, make_benchmark(BenchmarkId::Forsaken));
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(std::max(std::abs(e.xs(i, 0)), std::abs(e.ys(i, 0))) == 1.5);
  }
}

TEST_CASE("initialization is deterministic in the seed") {
  SolverConfig c;
  c.seed = 42;
  const Objective obj = make_benchmark(BenchmarkId::SixthOrder);
  const Ensemble a = initialize(c, obj);
  const Ensemble b = initialize(c, obj);
  CHECK(a.xs == b.xs);
  CHECK(a.ys == b.ys);
  c.seed = 43;
  CHECK_FALSE(initialize(c, obj).xs == a.xs);
}

TEST_CASE("uniform initialization on an unbounded box is a config error") {
  const double inf = std::numeric_limits<double>::infinity();
  const Objective obj =
      make_benchmark(BenchmarkId::Bilinear).with_domains(BoxDomain({-inf}, {inf}), BoxDomain({-inf}, {inf}));
  SolverConfig c;
  CHECK_THROWS_AS(initialize(c, obj), ConfigError);
  c.init = InitSpec::gaussian(0.0, 1.0);
  CHECK_NOTHROW(initialize(c, obj));
}

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_NOTHROW(validate(c));
  SUBCASE("dt outside (0,1)") {
    c.dt_y = 1.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
  }
  SUBCASE("dt_x outside (0,1)") {
    c.epsilon_scale = 20.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
  }
  SUBCASE("zero particles") {
    c.n_particles = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);
  }
  SUBCASE("theory check") {
    c.check_theory = true;
    c.sigma_x = 1.5;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.sigma_x = c.sigma_y = 1.0;
    CHECK_NOTHROW(validate(c));
  }
}

TEST_CASE("a lone noiseless particle stays put") {
  SolverConfig c;
  c.n_particles = 1;
  c.sigma_x = c.sigma_y = 0.0;
  const Objective obj = make_benchmark(BenchmarkId::Forsaken);
  const Ensemble e0 = initialize(c, obj);
  const Ensemble e1 = step(e0, c, obj);
  CHECK(e1.xs == e0.xs);
  CHECK(e1.ys == e0.ys);
  CHECK(e1.step_index == 1);
}

TEST_CASE("noiseless update contracts deviations by 1 - lambda dt") {
  SolverConfig c;
  c.sigma_x = c.sigma_y = 0.0;
  c.lambda_x = c.lambda_y = 2.0;
  c.dt_y = 0.1;
  const Objective obj = make_benchmark(BenchmarkId::Bilinear);
  Ensemble e;
  e.xs = ParticleMatrix::column(std::vector<double>{-3.0, 0.5, 2.0});
  e.ys = ParticleMatrix::column(std::vector<double>{1.0, -1.0, 3.0});
  const auto y_rows = ParticleMatrix::column(std::vector<double>{0.2, 0.2, 0.2});
  const Ensemble next = update_particles(e, frozen_consensus({0.25}, y_rows), c, obj);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(next.xs(i, 0) - 0.25 == doctest::Approx(0.8 * (e.xs(i, 0) - 0.25)));
    CHECK(next.ys(i, 0) - 0.2 == doctest::Approx(0.8 * (e.ys(i, 0) - 0.2)));
  }
}

TEST_CASE("anisotropic noise vanishes in a coordinate with zero deviation") {
  SolverConfig c;
  c.n_particles = 1;
  c.sigma_x = c.sigma_y = 3.0;
  const Objective obj = plane_2d();
  Ensemble e;
  e.xs = ParticleMatrix::from_rows({{0.0, 3.0}});
  e.ys = ParticleMatrix::from_rows({{1.0, 1.0}});
  const auto y_rows = ParticleMatrix::from_rows({{1.0, 0.0}});
  const Ensemble next = update_particles(e, frozen_consensus({0.0, 0.0}, y_rows), c, obj);
  CHECK(next.xs(0, 0) == 0.0);
  CHECK(next.xs(0, 1) != 3.0);
  CHECK(next.ys(0, 0) == 1.0);
  c.diffusion = DiffusionMode::Isotropic;
  CHECK(update_particles(e, frozen_consensus({0.0, 0.0}, y_rows), c, obj).xs(0, 0) != 0.0);
}

TEST_CASE("update is simultaneous: permuting noiseless particles permutes the result") {
  SolverConfig c;
  c.n_particles = 3;
  c.sigma_x = c.sigma_y = 0.0;
  const Objective obj = make_benchmark(BenchmarkId::BilinearlyCoupled);
  Ensemble a;
  a.xs = ParticleMatrix::column(std::vector<double>{-1.0, 0.5, 2.0});
  a.ys = ParticleMatrix::column(std::vector<double>{1.5, -2.0, 0.1});
  Ensemble b;
  b.xs = ParticleMatrix::column(std::vector<double>{2.0, -1.0, 0.5});
  b.ys = ParticleMatrix::column(std::vector<double>{0.1, 1.5, -2.0});
  const Ensemble na = step(a, c, obj);
  const Ensemble nb = step(b, c, obj);
  const std::size_t perm[] = {2, 0, 1};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(nb.xs(i, 0) == doctest::Approx(na.xs(perm[i], 0)).epsilon(1e-12));
    CHECK(nb.ys(i, 0) == doctest::Approx(na.ys(perm[i], 0)).epsilon(1e-12));
  }
}

TEST_CASE("projection keeps every particle in the box") {
  SolverConfig c;
  c.sigma_x = c.sigma_y = 4.0;
  c.horizon = 3.0;
  const Objective obj = make_benchmark(BenchmarkId::Forsaken);
  RunOptions opts;
  bool inside = true;
  opts.on_step = [&](const StepView& v) {
    for (std::size_t i = 0; i < v.ensemble.size(); ++i) {
      inside = inside && obj.domain_x().contains(v.ensemble.xs.row(i)) && obj.domain_y().contains(v.ensemble.ys.row(i));
    }
  };
  run(c, obj, opts);
  CHECK(inside);
}

TEST_CASE("run records ceil(T / dt) steps") {
  SolverConfig c;
  c.horizon = 15.0;
  c.dt_y = 0.1;
  const RunRecord r = run(c, make_benchmark(BenchmarkId::Bilinear));
  CHECK(r.steps() == 150);
  CHECK(r.times.size() == 151);
  CHECK(r.times.back() == doctest::Approx(15.0));
  CHECK(r.final_ensemble.step_index == 150);
  // Every state is evaluated once as an N x N payoff plus N inner points.
  CHECK(r.eval_count == 151u * (20u * 20u + 20u));
  c.horizon = 0.25;
  CHECK(c.step_count() == 3);
}

TEST_CASE("epsilon = 1 matches an explicit dt_x = dt_y") {
  SolverConfig a;
  a.seed = 9;
  a.horizon = 2.0;
  SolverConfig b = a;
  b.epsilon_scale = 0.5;
  b.dt_x_override = a.dt_y;
  const Objective obj = make_benchmark(BenchmarkId::Forsaken);
  const RunRecord ra = run(a, obj);
  const RunRecord rb = run(b, obj);
  CHECK(ra.final_ensemble.xs == rb.final_ensemble.xs);
  CHECK(ra.final_ensemble.ys == rb.final_ensemble.ys);
  CHECK(b.dt_x() == a.dt_y);
}

TEST_CASE("runs are bitwise reproducible") {
  SolverConfig c;
  c.seed = 1234;
  c.horizon = 3.0;
  const Objective obj = make_benchmark(BenchmarkId::SixthOrder);
  const RunRecord a = run(c, obj);
  const RunRecord b = run(c, obj);
  CHECK(a.final_ensemble.xs == b.final_ensemble.xs);
  CHECK(a.final_ensemble.ys == b.final_ensemble.ys);
  CHECK(a.spread_x == b.spread_x);
  CHECK(a.consensus_x == b.consensus_x);
  CHECK(a.best_pair_trace == b.best_pair_trace);
}

TEST_CASE("with alpha = beta = 0 the ensemble means perform an unbiased random walk") {
  SolverConfig c;
  c.n_particles = 10;
  c.alpha = c.beta = 0.0;
  c.lambda_x = c.lambda_y = 0.5;
  c.sigma_x = c.sigma_y = 1.0;
  c.dt_y = 0.01;
  c.horizon = 100.0;
  c.project = false;
  c.init = InitSpec::gaussian(0.0, 1.0);
  c.seed = 77;
  const Objective obj = make_benchmark(BenchmarkId::Bilinear);
  // Standardize each mean increment by its conditional standard deviation.
  double sum_zx = 0.0, sum_zy = 0.0;
  std::size_t count = 0;
  std::optional<Ensemble> previous;
  auto conditional_sd = [&](const ParticleMatrix& m) {
    const double mu = mean(m)[0];
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += (m(i, 0) - mu) * (m(i, 0) - mu);
    return c.sigma_x * std::sqrt(c.dt_y) * std::sqrt(s) / static_cast<double>(m.rows());
  };
  RunOptions opts;
  opts.on_step = [&](const StepView& v) {
    if (previous) {
      sum_zx += (mean(v.ensemble.xs)[0] - mean(previous->xs)[0]) / conditional_sd(previous->xs);
      sum_zy += (mean(v.ensemble.ys)[0] - mean(previous->ys)[0]) / conditional_sd(previous->ys);
      ++count;
    }
    previous = v.ensemble;
  };
  run(c, obj, opts);
  REQUIRE(count == 10000);
  const double se = std::sqrt(static_cast<double>(count));
  CHECK(std::abs(sum_zx) < 4.0 * se);
  CHECK(std::abs(sum_zy) < 4.0 * se);
}

TEST_CASE("bilinear reference run reaches consensus on the min-max set") {
  // The min-max set of xy is the line {0} x Y: once x = 0 every y is optimal,
  // so the y-population agrees on a seed-dependent point of that line.
  const Objective obj = make_benchmark(BenchmarkId::Bilinear);
  const ReferencePoint line = reference_point(BenchmarkId::Bilinear);
  int good = 0;
  double widest_y = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SolverConfig c;
    c.n_particles = 25;
    c.lambda_x = c.lambda_y = 1.0;
    c.sigma_x = c.sigma_y = 1.5;
    c.alpha = c.beta = 1e4;
    c.dt_y = 0.1;
    c.horizon = 15.0;
    c.seed = seed;
    const RunRecord r = run(c, obj);
    const BestPair& bp = r.best_pair_trace.back();
    const bool ok = std::max(r.spread_x.back(), r.spread_y.back()) < 0.5 &&
                    std::sqrt(error_to_reference(bp, line)) < 0.3;
    good += ok ? 1 : 0;
    widest_y = std::max(widest_y, std::abs(bp.y[0]));
  }
  CHECK(good >= 16);
  CHECK(widest_y > 0.3);
}
