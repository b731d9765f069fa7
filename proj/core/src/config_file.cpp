#include "cbomm/config_file.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "cbomm/errors.hpp"

namespace cbomm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("setting '" + std::string(key) + "': expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_unsigned(std::string_view key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("setting '" + std::string(key) + "': expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(std::string_view key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("setting '" + std::string(key) + "': expected true/false, got '" + v + "'");
}

// Keys owned by the harness rather than the solver.
const std::set<std::string, std::less<>> kHarnessKeys = {"benchmark", "parameter", "values", "trials", "jobs"};

}  // namespace

Settings parse_settings(std::string_view text) {
  Settings out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

Settings load_settings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_settings(buf.str());
}

void apply_settings(const Settings& settings, SolverConfig& c) {
  for (const auto& [key, value] : settings) {
    if (kHarnessKeys.contains(key)) continue;
    if (key == "n_particles" || key == "N") {
      c.n_particles = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "lambda") {
      c.lambda_x = c.lambda_y = to_double(key, value);
    } else if (key == "lambda_x") {
      c.lambda_x = to_double(key, value);
    } else if (key == "lambda_y") {
      c.lambda_y = to_double(key, value);
    } else if (key == "sigma") {
      c.sigma_x = c.sigma_y = to_double(key, value);
    } else if (key == "sigma_x") {
      c.sigma_x = to_double(key, value);
    } else if (key == "sigma_y") {
      c.sigma_y = to_double(key, value);
    } else if (key == "alpha") {
      c.alpha = to_double(key, value);
    } else if (key == "beta") {
      c.beta = to_double(key, value);
    } else if (key == "alpha_beta") {
      c.alpha = c.beta = to_double(key, value);
    } else if (key == "dt" || key == "dt_y") {
      c.dt_y = to_double(key, value);
    } else if (key == "dt_x") {
      c.dt_x_override = to_double(key, value);
    } else if (key == "epsilon" || key == "epsilon_scale") {
      c.epsilon_scale = to_double(key, value);
    } else if (key == "horizon" || key == "T") {
      c.horizon = to_double(key, value);
    } else if (key == "diffusion") {
      if (value == "anisotropic") {
        c.diffusion = DiffusionMode::Anisotropic;
      } else if (value == "isotropic") {
        c.diffusion = DiffusionMode::Isotropic;
      } else {
        throw ConfigError("setting 'diffusion': expected anisotropic|isotropic, got '" + value + "'");
      }
    } else if (key == "seed") {
      c.seed = to_unsigned(key, value);
    } else if (key == "init") {
      if (value == "uniform" || value == "uniform_box") {
        c.init.mode = InitSpec::Mode::UniformBox;
      } else if (value == "border") {
        c.init.mode = InitSpec::Mode::Border;
      } else if (value == "gaussian") {
        c.init.mode = InitSpec::Mode::Gaussian;
      } else {
        throw ConfigError("setting 'init': expected uniform|border|gaussian, got '" + value + "'");
      }
    } else if (key == "init_mean") {
      c.init.mean = to_double(key, value);
    } else if (key == "init_std") {
      c.init.std = to_double(key, value);
    } else if (key == "project") {
      c.project = to_bool(key, value);
    } else if (key == "check_theory") {
      c.check_theory = to_bool(key, value);
    } else {
      throw ConfigError("unknown setting '" + key + "'");
    }
  }
}

}  // namespace cbomm
