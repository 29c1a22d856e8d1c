#pragma once

#include <vector>

#include "weil/linalg.hpp"

namespace weil::testing {

/// Dense Gaussian elimination over Q, kept independent of the sparse
/// fraction-free routine it checks.
inline std::size_t dense_rank(std::vector<std::vector<Rat>> a) {
  std::size_t r = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

inline std::vector<std::vector<Rat>> to_dense(const SparseMatrix& m) {
  std::vector<std::vector<Rat>> d(m.rows(), std::vector<Rat>(m.cols(), 0));
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (const auto& [r, v] : m.column(c)) d[r][c] = v;
  return d;
}

}  // namespace weil::testing
