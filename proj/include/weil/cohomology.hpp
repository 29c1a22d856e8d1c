#pragma once

#include <map>
#include <string>
#include <vector>

#include "weil/cekalkman.hpp"
#include "weil/groupoid.hpp"
#include "weil/linalg.hpp"

namespace weil {

/// The differential does not preserve the chosen slice. The message carries
/// a basis element whose image escapes.
class TruncationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// How a slice of W(A) is cut down to finite dimension.
///   none   : no bound; only for algebroids over a point.
///   degree : coefficient polynomial degree <= D.
///   weight : coefficient degree + #d^a + #theta + #mu <= D, the grading in
///            which x, dx, theta and mu all count 1.
enum class Truncation { none, degree, weight };

struct BasisElement {
  WeilKey key;
  Exponents mono;
};
struct BasisElementLess {
  bool operator()(const BasisElement& a, const BasisElement& b) const;
};

/// Ordered monomial basis of a finite slice of W(A).
struct BasisSlice {
  std::vector<BasisElement> elems;
  int D = 0;
  Truncation mode = Truncation::none;

  std::size_t size() const { return elems.size(); }
  /// Position of (key, mono), or size() if absent.
  std::size_t find(const WeilKey& k, const Exponents& mono) const;
  /// Rebuilds the lookup table after `elems` was reordered or edited.
  void reindex();
  WeilElement element(const AlgebroidPtr& P, std::size_t i) const;

 private:
  std::map<BasisElement, std::size_t, BasisElementLess> index_;
};

BasisSlice enumerate_basis(const Algebroid& P, int p, int q, int D = 0, Truncation mode = Truncation::none);
/// Union of the bidegree slices with p + q = n.
BasisSlice total_basis(const Algebroid& P, int n, int D = 0, Truncation mode = Truncation::none);

enum class WeilDiff { dh, dv, total };

/// Coordinates of w in `slice`; throws TruncationError if w has a term outside it.
SparseVec coordinates(const WeilElement& w, const BasisSlice& slice);
/// Columns are images of the domain basis expanded in the codomain basis.
SparseMatrix assemble_matrix(const AlgebroidPtr& P, WeilDiff d, const BasisSlice& dom, const BasisSlice& cod);

/// dims[n], ranks[n] = rank of the differential leaving degree n, and
/// betti[n] = dims[n] - ranks[n] - ranks[n-1], for n = 0..maxdeg.
struct RankResult {
  std::vector<std::size_t> dims, ranks;
  std::vector<long> betti;
};

RankResult betti_total(const AlgebroidPtr& P, int maxdeg, int D = 0, Truncation mode = Truncation::none);
/// Row q with d^h, degrees p = 0..maxp.
RankResult betti_row(const AlgebroidPtr& P, int q, int maxp, int D = 0, Truncation mode = Truncation::none);

/// g acting on a point by zero fields.
ActionPtr point_action(const AlgebroidPtr& g);
/// H^p(g; S^q g*) for p = 0..maxp from the Chevalley-Eilenberg differential
/// of cekalkman (coadjoint representation on the symmetric slot).
RankResult ce_betti(const AlgebroidPtr& g, int q, int maxp);

/// Normalized Bott-Shulman row q, p = 0..pmax, on forms with coefficient
/// degree + q <= D. The nerve faces and degeneracies up to level pmax + 1 must
/// be affine; otherwise DomainError.
RankResult bott_shulman_row_cohomology(const SplitGroupoid& G, int q, int pmax, int D);

}  // namespace weil
