#include "cbomm/dynamics.hpp"

#include <cmath>
#include <random>
#include <string>

#include "cbomm/errors.hpp"
#include "cbomm/rng.hpp"

namespace cbomm {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

void sample_uniform(std::span<double> z, const BoxDomain& box, SplitMix64& rng) {
  for (std::size_t k = 0; k < z.size(); ++k) {
    z[k] = std::uniform_real_distribution<double>(box.lower()[k], box.upper()[k])(rng);
  }
}

void sample_gaussian(std::span<double> z, double mean, double std, SplitMix64& rng) {
  std::normal_distribution<double> normal(mean, std);
  for (double& v : z) v = normal(rng);
}

// Uniform point on the boundary of the joint box X x Y: pick one of the
// 2 (d1 + d2) faces uniformly, pin that coordinate, sample the rest.
void sample_border(std::span<double> x, std::span<double> y, const BoxDomain& bx, const BoxDomain& by,
                   SplitMix64& rng) {
  sample_uniform(x, bx, rng);
  sample_uniform(y, by, rng);
  const std::size_t dims = x.size() + y.size();
  const std::size_t face = std::uniform_int_distribution<std::size_t>(0, 2 * dims - 1)(rng);
  const std::size_t coord = face / 2;
  const bool upper = face % 2 == 1;
  if (coord < x.size()) {
    x[coord] = upper ? bx.upper()[coord] : bx.lower()[coord];
  } else {
    const std::size_t k = coord - x.size();
    y[k] = upper ? by.upper()[k] : by.lower()[k];
  }
}

void check_finite_row(std::span<const double> row, std::uint64_t step, std::size_t particle, const char* pop) {
  for (double v : row) {
    if (!std::isfinite(v)) {
      throw NumericalError(std::string("non-finite ") + pop + " state at step " + std::to_string(step) +
                               ", particle " + std::to_string(particle),
                           particle, static_cast<std::size_t>(step));
    }
  }
}

// z <- z - lambda dt dev + sigma sqrt(dt) D(dev) xi, dev = z - target.
void em_update(std::span<double> z, std::span<const double> target, double lambda, double sigma, double dt,
               DiffusionMode mode, SplitMix64& rng) {
  const std::size_t d = z.size();
  double dev_buf[8];
  std::vector<double> dev_heap;
  double* dev = dev_buf;
  if (d > 8) {
    dev_heap.resize(d);
    dev = dev_heap.data();
  }
  double norm2 = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    dev[k] = z[k] - target[k];
    norm2 += dev[k] * dev[k];
  }
  const double norm = std::sqrt(norm2);
  const double noise_scale = sigma * std::sqrt(dt);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t k = 0; k < d; ++k) {
    const double xi = normal(rng);
    const double diffusion = mode == DiffusionMode::Anisotropic ? dev[k] : norm;
    z[k] = z[k] - lambda * dt * dev[k] + noise_scale * diffusion * xi;
  }
}

}  // namespace

std::size_t SolverConfig::step_count() const {
  const double q = horizon / dt_y;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, r)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(q));
}

void validate(const SolverConfig& c) {
  if (c.n_particles == 0) throw ConfigError("n_particles must be positive");
  if (!finite_positive(c.lambda_x) || !finite_positive(c.lambda_y)) {
    throw ConfigError("lambda_x and lambda_y must be positive");
  }
  if (!finite_nonnegative(c.sigma_x) || !finite_nonnegative(c.sigma_y)) {
    throw ConfigError("sigma_x and sigma_y must be nonnegative");
  }
  if (!finite_nonnegative(c.alpha) || !finite_nonnegative(c.beta)) {
    throw ConfigError("alpha and beta must be finite and nonnegative");
  }
  if (!finite_positive(c.epsilon_scale)) throw ConfigError("epsilon_scale must be positive");
  if (!(c.dt_y > 0.0 && c.dt_y < 1.0)) throw ConfigError("dt_y must lie in (0, 1)");
  const double dtx = c.dt_x();
  if (!(dtx > 0.0 && dtx < 1.0)) throw ConfigError("dt_x = epsilon_scale * dt_y must lie in (0, 1)");
  if (!finite_positive(c.horizon)) throw ConfigError("horizon must be positive");
  if (c.init.mode == InitSpec::Mode::Gaussian && !finite_positive(c.init.std)) {
    throw ConfigError("gaussian init requires std > 0");
  }
  if (c.check_theory) {
    if (!(2.0 * c.lambda_x - c.sigma_x * c.sigma_x > 0.0) || !(2.0 * c.lambda_y - c.sigma_y * c.sigma_y > 0.0)) {
      throw ConfigError("theory check: need 2 lambda - sigma^2 > 0 in both populations");
    }
  }
}

Ensemble initialize(const SolverConfig& config, const Objective& obj) {
  validate(config);
  const auto& bx = obj.domain_x();
  const auto& by = obj.domain_y();
  if (config.init.mode != InitSpec::Mode::Gaussian && (!bx.bounded() || !by.bounded())) {
    throw ConfigError("uniform and border initialization need a bounded search box");
  }
  const std::size_t n = config.n_particles;
  Ensemble e;
  e.xs = ParticleMatrix(n, obj.dim_x());
  e.ys = ParticleMatrix(n, obj.dim_y());
  e.seed = config.seed;
  e.step_index = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto rng_x = keyed_stream(config.seed, StreamTag::InitX, 0, i);
    auto rng_y = keyed_stream(config.seed, StreamTag::InitY, 0, i);
    switch (config.init.mode) {
      case InitSpec::Mode::UniformBox:
        sample_uniform(e.xs.row(i), bx, rng_x);
        sample_uniform(e.ys.row(i), by, rng_y);
        break;
      case InitSpec::Mode::Border:
        sample_border(e.xs.row(i), e.ys.row(i), bx, by, rng_x);
        break;
      case InitSpec::Mode::Gaussian:
        sample_gaussian(e.xs.row(i), config.init.mean, config.init.std, rng_x);
        sample_gaussian(e.ys.row(i), config.init.mean, config.init.std, rng_y);
        break;
    }
  }
  return e;
}

Ensemble update_particles(const Ensemble& ensemble, const ConsensusResult& consensus, const SolverConfig& config,
                          const Objective& obj) {
  const std::size_t n = ensemble.size();
  if (consensus.x_cons.size() != ensemble.xs.cols() || consensus.y_cons.rows() != n ||
      consensus.y_cons.cols() != ensemble.ys.cols()) {
    throw InputError("update_particles: consensus data does not match the ensemble");
  }
  Ensemble next = ensemble;
  const double dtx = config.dt_x();
  const double dty = config.dt_y;
  const std::uint64_t k = ensemble.step_index;
  for (std::size_t i = 0; i < n; ++i) {
    auto rng_x = keyed_stream(ensemble.seed, StreamTag::NoiseX, k, i);
    auto rng_y = keyed_stream(ensemble.seed, StreamTag::NoiseY, k, i);
    auto xi = next.xs.row(i);
    auto yi = next.ys.row(i);
    em_update(xi, consensus.x_cons, config.lambda_x, config.sigma_x, dtx, config.diffusion, rng_x);
    em_update(yi, consensus.y_cons.row(i), config.lambda_y, config.sigma_y, dty, config.diffusion, rng_y);
    check_finite_row(xi, k, i, "x");
    check_finite_row(yi, k, i, "y");
    if (config.project) {
      obj.domain_x().clamp(xi);
      obj.domain_y().clamp(yi);
    }
  }
  next.step_index = k + 1;
  return next;
}

StepResult advance(const Ensemble& ensemble, const SolverConfig& config, const Objective& obj) {
  ConsensusResult consensus = compute_consensus(obj, ensemble.xs, ensemble.ys, config.weights());
  Ensemble next = update_particles(ensemble, consensus, config, obj);
  return {std::move(next), std::move(consensus)};
}

namespace {

void record_state(RunRecord& rec, double t, const Ensemble& e, const ConsensusResult& c,
                  const std::optional<ReferencePoint>& ref) {
  rec.times.push_back(t);
  rec.spread_x.push_back(spread(e.xs));
  rec.spread_y.push_back(spread(e.ys));
  rec.mean_x.push_back(mean(e.xs));
  rec.mean_y.push_back(mean(e.ys));
  rec.consensus_x.push_back(c.x_cons);
  BestPair bp = best_pair_from_payoff(e.xs, e.ys, c.payoff);
  if (ref) {
    const auto [vx, vy] = variance(e, *ref);
    rec.variance_x.push_back(vx);
    rec.variance_y.push_back(vy);
    rec.best_error.push_back(error_to_reference(bp, *ref));
  } else {
    const double nan = std::nan("");
    rec.variance_x.push_back(nan);
    rec.variance_y.push_back(nan);
    rec.best_error.push_back(nan);
  }
  rec.best_pair_trace.push_back(std::move(bp));
}

}  // namespace

RunRecord run(const SolverConfig& config, const Objective& obj, const RunOptions& options) {
  validate(config);
  const Objective local(obj);  // fresh evaluation counter for this run
  const std::size_t steps = config.step_count();
  RunRecord rec;
  rec.times.reserve(steps + 1);

  Ensemble state = initialize(config, local);
  for (std::size_t k = 0; k < steps; ++k) {
    StepResult r = advance(state, config, local);
    const double t = static_cast<double>(k) * config.dt_y;
    record_state(rec, t, state, r.consensus, options.reference);
    if (options.on_step) options.on_step(StepView{k, t, state, r.consensus});
    state = std::move(r.next);
  }
  // Final state: the consensus evaluation supplies its payoff matrix.
  const ConsensusResult last = compute_consensus(local, state.xs, state.ys, config.weights());
  const double t_end = static_cast<double>(steps) * config.dt_y;
  record_state(rec, t_end, state, last, options.reference);
  if (options.on_step) options.on_step(StepView{steps, t_end, state, last});

  rec.final_ensemble = std::move(state);
  rec.eval_count = local.evaluations();
  return rec;
}

}  // namespace cbomm
