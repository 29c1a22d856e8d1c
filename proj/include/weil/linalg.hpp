#pragma once

#include <map>
#include <vector>

#include "weil/exactpoly.hpp"

namespace weil {

/// Sparse vector: index -> nonzero rational.
using SparseVec = std::map<std::size_t, Rat>;

/// Column-major sparse matrix over Q.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols, SparseVec{}) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_.size(); }
  const SparseVec& column(std::size_t c) const { return cols_.at(c); }
  void set_column(std::size_t c, SparseVec v);
  void set(std::size_t r, std::size_t c, const Rat& v);
  Rat get(std::size_t r, std::size_t c) const;
  std::size_t nonzeros() const;
  bool is_zero() const { return nonzeros() == 0; }

  /// this * o; requires cols() == o.rows().
  SparseMatrix operator*(const SparseMatrix& o) const;

 private:
  std::size_t rows_ = 0;
  std::vector<SparseVec> cols_;
};

/// Exact rank. Columns are cleared of denominators and reduced by integer
/// row operations a*v - b*u with content division, so no fractions are formed.
std::size_t rank(const SparseMatrix& m);
/// Rank of a list of sparse vectors (the columns of a matrix).
std::size_t rank(const std::vector<SparseVec>& columns);

}  // namespace weil
