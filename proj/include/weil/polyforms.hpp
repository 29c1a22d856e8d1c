#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "weil/exactpoly.hpp"

namespace weil {

using Mask = std::uint64_t;

inline int popcount(Mask m) { return __builtin_popcountll(m); }
/// Sign of the permutation sorting the concatenation (A, B) of two disjoint
/// increasing index lists. Zero if they overlap.
int shuffle_sign(Mask a, Mask b);
/// Orders masks by cardinality, then by the sorted index list.
struct MaskLess {
  bool operator()(Mask a, Mask b) const;
};

/// A vector field sum_k X^k d/dvar_k on a chart. Parameter components are zero.
class PolyVectorField {
 public:
  PolyVectorField() = default;
  explicit PolyVectorField(Chart chart);
  PolyVectorField(Chart chart, std::vector<Poly> comps);

  const Chart& chart() const { return chart_; }
  const std::vector<Poly>& comps() const { return comps_; }
  const Poly& comp(std::size_t k) const { return comps_.at(k); }

  Poly apply(const Poly& f) const;
  PolyVectorField operator+(const PolyVectorField& o) const;
  PolyVectorField operator*(const Poly& f) const;
  PolyVectorField embed(const Chart& c) const;
  bool operator==(const PolyVectorField& o) const { return chart_ == o.chart_ && comps_ == o.comps_; }

 private:
  Chart chart_;
  std::vector<Poly> comps_;
};

PolyVectorField bracket(const PolyVectorField& X, const PolyVectorField& Y);

/// Polynomial differential form, possibly of mixed degree. Keys are subsets
/// of the chart's coordinate indices (increasing order = the wedge order).
class PolyForm {
 public:
  using Comps = std::map<Mask, Poly, MaskLess>;

  PolyForm() = default;
  explicit PolyForm(Chart chart) : chart_(std::move(chart)) {}
  static PolyForm function(const Poly& f);
  static PolyForm basis(const Chart& c, Mask m, const Poly& coeff);
  /// dvar_i as a one-form.
  static PolyForm differential(const Chart& c, std::size_t i);

  const Chart& chart() const { return chart_; }
  const Comps& comps() const { return comps_; }
  Poly coeff(Mask m) const;
  bool is_zero() const { return comps_.empty(); }
  /// Highest degree present, -1 for zero.
  int max_degree() const;
  bool is_homogeneous() const;
  PolyForm part(int k) const;

  void add_term(Mask m, const Poly& c);
  PolyForm operator-() const;
  PolyForm& operator+=(const PolyForm& o);
  PolyForm& operator-=(const PolyForm& o);
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(const Rat& c, const PolyForm& a);
  friend PolyForm operator*(const Poly& f, const PolyForm& a);
  bool operator==(const PolyForm& o) const { return chart_ == o.chart_ && comps_ == o.comps_; }
  bool operator!=(const PolyForm& o) const { return !(*this == o); }

  PolyForm embed(const Chart& c) const;
  std::string to_string() const;

 private:
  Chart chart_;
  Comps comps_;
};

PolyForm wedge(const PolyForm& a, const PolyForm& b);
PolyForm ext_d(const PolyForm& a);
/// Contraction into the first slot (an antiderivation of degree -1).
PolyForm interior(const PolyVectorField& X, const PolyForm& a);
/// Cartan's formula d i_X + i_X d.
PolyForm lie(const PolyVectorField& X, const PolyForm& a);
/// F^* a where a lives on F.target() (extra parameters are lifted through).
PolyForm pullback(const PolyMap& F, const PolyForm& a);

/// Parses sums like "x*y dx^dy + (1 - x) dz + 3".
PolyForm parse_form(std::string_view text, const Chart& chart);

}  // namespace weil
