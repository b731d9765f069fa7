#pragma once

#include <map>
#include <string>
#include <string_view>

#include "cbomm/dynamics.hpp"

namespace cbomm {

/// Flat key/value settings. Text form: one `key = value` per line, `#`
/// starts a comment, blank lines ignored. Later assignments win.
using Settings = std::map<std::string, std::string, std::less<>>;

/// Throws ConfigError on a malformed line (no '=' or empty key).
Settings parse_settings(std::string_view text);
Settings load_settings_file(const std::string& path);

/// Applies every recognised solver key to `config`. Keys consumed elsewhere
/// (benchmark, sweep keys) are skipped; anything else is a ConfigError.
///
/// Solver keys: n_particles, lambda, lambda_x, lambda_y, sigma, sigma_x,
/// sigma_y, alpha, beta, alpha_beta, dt, dt_y, dt_x, epsilon, horizon (alias
/// T), diffusion (anisotropic|isotropic), seed, init (uniform|border|gaussian),
/// init_mean, init_std, project (true|false), check_theory (true|false).
void apply_settings(const Settings& settings, SolverConfig& config);

}  // namespace cbomm
