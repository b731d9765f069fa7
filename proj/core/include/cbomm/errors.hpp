#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cbomm {

/// Caller supplied something malformed (dimension mismatch, empty ensemble, bad parameter).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration violates a solver invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value. Carries the offending particle
/// (or iterate) index and, for dynamics, the step.
class NumericalError : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  NumericalError(const std::string& what, std::size_t index = npos, std::size_t step = npos)
      : std::runtime_error(what), index_(index), step_(step) {}

  std::size_t index() const noexcept { return index_; }
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t index_;
  std::size_t step_;
};

}  // namespace cbomm
