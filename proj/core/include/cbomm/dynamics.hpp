#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "cbomm/consensus.hpp"
#include "cbomm/diagnostics.hpp"
#include "cbomm/ensemble.hpp"
#include "cbomm/objective.hpp"

namespace cbomm {

enum class DiffusionMode {
  Anisotropic,  ///< noise scaled coordinate-wise by the deviation
  Isotropic,    ///< noise scaled by the Euclidean norm of the deviation
};

struct InitSpec {
  enum class Mode { UniformBox, Border, Gaussian };

  Mode mode = Mode::UniformBox;
  double mean = 0.0;  ///< Gaussian mode, every coordinate
  double std = 1.0;   ///< Gaussian mode, every coordinate

  static InitSpec uniform_box() { return {}; }
  static InitSpec border() { return {Mode::Border, 0.0, 1.0}; }
  static InitSpec gaussian(double mean, double std) { return {Mode::Gaussian, mean, std}; }
};

struct SolverConfig {
  std::size_t n_particles = 20;
  double lambda_x = 1.0;
  double lambda_y = 1.0;
  double sigma_x = 1.5;
  double sigma_y = 1.5;
  double alpha = 1e4;
  double beta = 1e4;
  double dt_y = 0.1;
  /// dt_x = epsilon_scale * dt_y unless dt_x_override is set.
  double epsilon_scale = 1.0;
  std::optional<double> dt_x_override;
  double horizon = 15.0;
  DiffusionMode diffusion = DiffusionMode::Anisotropic;
  std::uint64_t seed = 0;
  InitSpec init;
  bool project = true;
  /// Require 2 lambda - sigma^2 > 0 for both populations.
  bool check_theory = false;

  double dt_x() const noexcept { return dt_x_override.value_or(epsilon_scale * dt_y); }
  WeightParams weights() const noexcept { return {alpha, beta}; }
  /// ceil(horizon / dt_y), robust to representation error in the quotient.
  std::size_t step_count() const;
};

/// Throws ConfigError describing the first violated invariant.
void validate(const SolverConfig& config);

/// Samples N particles per population from the seeded stream.
Ensemble initialize(const SolverConfig& config, const Objective& obj);

/// Moves every particle given frozen consensus data: one Euler-Maruyama
/// substep with noise drawn from the (seed, step, particle) streams, then
/// projection if enabled. Does not touch the objective.
Ensemble update_particles(const Ensemble& ensemble, const ConsensusResult& consensus, const SolverConfig& config,
                          const Objective& obj);

struct StepResult {
  Ensemble next;
  /// Consensus data of the pre-step state that drove the update.
  ConsensusResult consensus;
};

StepResult advance(const Ensemble& ensemble, const SolverConfig& config, const Objective& obj);

inline Ensemble step(const Ensemble& ensemble, const SolverConfig& config, const Objective& obj) {
  return advance(ensemble, config, obj).next;
}

/// What a run callback sees for state k (k = 0 .. steps).
struct StepView {
  std::size_t step;
  double time;
  const Ensemble& ensemble;
  const ConsensusResult& consensus;
};

struct RunOptions {
  std::optional<ReferencePoint> reference;
  std::function<void(const StepView&)> on_step;
};

/// Runs step_count() steps from initialize() and records diagnostics for every
/// state including the initial and final one.
RunRecord run(const SolverConfig& config, const Objective& obj, const RunOptions& options = {});

}  // namespace cbomm
