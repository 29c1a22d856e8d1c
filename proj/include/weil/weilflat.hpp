#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "weil/algebroid.hpp"
#include "weil/randgen.hpp"

namespace weil {

/// Normal-ordered monomial d^D theta^T mu^e: D indexes base coordinates
/// (the odd generators d^a of bidegree (0,1)), T indexes frame sections
/// (theta^i, bidegree (1,0)), e is the exponent vector of the even mu^i
/// (bidegree (1,1)).
struct WeilKey {
  Mask D = 0;
  Mask T = 0;
  Exponents e;

  int p() const { return popcount(T) + static_cast<int>(total_degree(e)); }
  int q() const { return popcount(D) + static_cast<int>(total_degree(e)); }
  bool operator==(const WeilKey& o) const { return D == o.D && T == o.T && e == o.e; }
};

/// Canonical order: bidegree (p,q), then D, then T, then e.
struct WeilKeyLess {
  bool operator()(const WeilKey& a, const WeilKey& b) const;
};

/// Element of W(A) in flat coordinates: a finite sum of polynomial
/// coefficients times normal-ordered monomials.
class WeilElement {
 public:
  using Terms = std::map<WeilKey, Poly, WeilKeyLess>;

  WeilElement() = default;
  explicit WeilElement(AlgebroidPtr P) : P_(std::move(P)) {}

  static WeilElement function(AlgebroidPtr P, const Poly& f);
  static WeilElement dgen(AlgebroidPtr P, std::size_t a);
  static WeilElement theta(AlgebroidPtr P, std::size_t i);
  static WeilElement mu(AlgebroidPtr P, std::size_t i);
  static WeilElement term(AlgebroidPtr P, WeilKey k, const Poly& coeff);

  const AlgebroidPtr& presentation() const { return P_; }
  const Algebroid& alg() const { return *P_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const WeilKey& k, const Poly& c);
  WeilElement operator-() const;
  WeilElement& operator+=(const WeilElement& o);
  WeilElement& operator-=(const WeilElement& o);
  friend WeilElement operator+(WeilElement a, const WeilElement& b) { return a += b; }
  friend WeilElement operator-(WeilElement a, const WeilElement& b) { return a -= b; }
  friend WeilElement operator*(const Rat& c, const WeilElement& a);
  friend WeilElement operator*(const Poly& f, const WeilElement& a);
  bool operator==(const WeilElement& o) const;
  bool operator!=(const WeilElement& o) const { return !(*this == o); }

  /// Component of bidegree (p,q).
  WeilElement part(int p, int q) const;
  std::vector<std::pair<int, int>> bidegrees() const;
  bool is_homogeneous() const { return bidegrees().size() <= 1; }

  std::string to_string() const;

 private:
  AlgebroidPtr P_;
  Terms terms_;
};

/// Graded-commutative product (Koszul signs by total degree).
WeilElement operator*(const WeilElement& a, const WeilElement& b);

WeilElement weil_dv(const WeilElement& w);
WeilElement weil_dh(const WeilElement& w);
/// Contraction by a section over the base chart.
WeilElement weil_interior(const Section& a, const WeilElement& w);
/// [d^h, i_a].
WeilElement weil_lie(const Section& a, const WeilElement& w);

/// Random element with terms of bidegree <= (maxp, maxq); homogeneous of
/// bidegree exactly (maxp, maxq) if `homogeneous`.
WeilElement random_weil(Rng& rng, AlgebroidPtr P, int maxp, int maxq, bool homogeneous, unsigned maxdeg = 2,
                        unsigned terms = 3);
/// All monomial keys of bidegree (p,q) for the presentation's sizes.
std::vector<WeilKey> weil_keys(const Algebroid& P, int p, int q);

/// d^v^2 = 0, d^h^2 = 0, d^v d^h + d^h d^v = 0 on generators and on seeded
/// random elements of bidegree <= (2,2).
Report check_d2(AlgebroidPtr P, std::uint64_t seed = 0, unsigned samples = 20);

/// Cartan relations [i_a,i_b] = 0, [L_a, i_b] = i_[a,b], [L_a, L_b] = L_[a,b]
/// evaluated on `w`.
Report check_cartan(const Section& a, const Section& b, const WeilElement& w);

}  // namespace weil
