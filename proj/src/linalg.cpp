#include "weil/linalg.hpp"

namespace weil {

void SparseMatrix::set_column(std::size_t c, SparseVec v) {
  for (auto it = v.begin(); it != v.end();) {
    if (it->first >= rows_) throw DomainError("SparseMatrix: row index out of range");
    it = it->second == 0 ? v.erase(it) : std::next(it);
  }
  cols_.at(c) = std::move(v);
}

void SparseMatrix::set(std::size_t r, std::size_t c, const Rat& v) {
  if (r >= rows_) throw DomainError("SparseMatrix: row index out of range");
  if (v == 0) cols_.at(c).erase(r);
  else cols_.at(c)[r] = v;
}

Rat SparseMatrix::get(std::size_t r, std::size_t c) const {
  const auto& col = cols_.at(c);
  auto it = col.find(r);
  return it == col.end() ? Rat(0) : it->second;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : cols_) n += c.size();
  return n;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (cols() != o.rows()) throw DomainError("SparseMatrix: shape mismatch");
  SparseMatrix out(rows_, o.cols());
  for (std::size_t j = 0; j < o.cols(); ++j) {
    SparseVec acc;
    for (const auto& [k, b] : o.column(j))
      for (const auto& [i, a] : cols_[k]) acc[i] += a * b;
    out.set_column(j, std::move(acc));
  }
  return out;
}

namespace {

using IntVec = std::map<std::size_t, mpz_class>;

IntVec to_primitive(const SparseVec& v) {
  mpz_class l = 1;
  for (const auto& [i, x] : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  IntVec out;
  mpz_class g = 0;
  for (const auto& [i, x] : v) {
    mpz_class n = x.get_num() * (l / x.get_den());
    if (n != 0) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
      out.emplace(i, std::move(n));
    }
  }
  if (g > 1)
    for (auto& [i, n] : out) mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), g.get_mpz_t());
  return out;
}

void divide_content(IntVec& v) {
  mpz_class g = 0;
  for (const auto& [i, n] : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1)
    for (auto& [i, n] : v) mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), g.get_mpz_t());
}

}  // namespace

std::size_t rank(const std::vector<SparseVec>& columns) {
  // Pivot vectors keyed by their leading index.
  std::map<std::size_t, IntVec> pivots;
  for (const auto& col : columns) {
    IntVec v = to_primitive(col);
    while (!v.empty()) {
      auto lead = v.begin()->first;
      auto pit = pivots.find(lead);
      if (pit == pivots.end()) {
        pivots.emplace(lead, std::move(v));
        break;
      }
      const IntVec& u = pit->second;
      mpz_class a = u.at(lead), b = v.begin()->second;
      mpz_class g = gcd(a, b);
      a /= g;
      b /= g;
      // v <- a v - b u, which clears the leading entry.
      for (auto& [i, n] : v) n *= a;
      for (const auto& [i, n] : u) {
        auto it = v.try_emplace(i, 0).first;
        it->second -= b * n;
        if (it->second == 0) v.erase(it);
      }
      divide_content(v);
    }
  }
  return pivots.size();
}

std::size_t rank(const SparseMatrix& m) {
  std::vector<SparseVec> cols;
  cols.reserve(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) cols.push_back(m.column(c));
  return rank(cols);
}

}  // namespace weil
