#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cbomm {

/// Row-major N x d block of particle positions, one particle per row.
class ParticleMatrix {
 public:
  ParticleMatrix() = default;
  ParticleMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Builds an N x 1 matrix from scalar positions.
  static ParticleMatrix column(std::span<const double> values);
  static ParticleMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  double& operator()(std::size_t i, std::size_t k) noexcept { return data_[i * cols_ + k]; }
  double operator()(std::size_t i, std::size_t k) const noexcept { return data_[i * cols_ + k]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  friend bool operator==(const ParticleMatrix&, const ParticleMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// The 2N-particle state. The generator is counter-based, so (seed,
/// step_index) is the whole random state.
struct Ensemble {
  ParticleMatrix xs;
  ParticleMatrix ys;
  std::uint64_t step_index = 0;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return xs.rows(); }

  friend bool operator==(const Ensemble&, const Ensemble&) = default;
};

}  // namespace cbomm
