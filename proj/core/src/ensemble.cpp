#include "cbomm/ensemble.hpp"

#include <algorithm>

#include "cbomm/errors.hpp"

namespace cbomm {

ParticleMatrix ParticleMatrix::column(std::span<const double> values) {
  ParticleMatrix m(values.size(), 1);
  std::copy(values.begin(), values.end(), m.data().begin());
  return m;
}

ParticleMatrix ParticleMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  ParticleMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw InputError("ParticleMatrix::from_rows: ragged rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

}  // namespace cbomm
