#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "weil/polyforms.hpp"
#include "weil/report.hpp"

namespace weil {

/// Section coefficients in the global frame e_1..e_n, all on one chart
/// (the base chart, possibly extended by parameters).
using Section = std::vector<Poly>;

/// Local presentation of a Lie algebroid over a polynomial chart with a
/// global frame: anchor matrix rho^a_i and structure functions c^i_{jk}.
class Algebroid {
 public:
  /// `anchor[i][a]` = rho^a_i, the a-th component of rho(e_i).
  /// `structure[{j,k}][i]` = c^i_{jk} for j < k (0-based); missing pairs are zero.
  Algebroid(Chart base, std::size_t rank, std::vector<std::vector<Poly>> anchor,
            const std::map<std::pair<std::size_t, std::size_t>, std::vector<Poly>>& structure);

  const Chart& base() const { return base_; }
  std::size_t rank() const { return n_; }
  std::size_t dim() const { return base_.size(); }
  const Poly& anchor(std::size_t i, std::size_t a) const { return anchor_[i][a]; }
  /// c^i_{jk}, antisymmetric in (j,k).
  const Poly& c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * n_ + j) * n_ + k]; }
  bool constant_structure() const;

  /// rho(e_i) as a vector field on the base.
  PolyVectorField anchor_field(std::size_t i) const;
  /// rho(a) for a section over `a`'s chart.
  PolyVectorField anchor_of(const Section& a) const;

  /// The same presentation with every coefficient moved to `ext`, which must be
  /// the base chart plus parameters.
  Algebroid on(const Chart& ext) const;

  bool operator==(const Algebroid& o) const;

 private:
  Chart base_;
  std::size_t n_;
  std::vector<std::vector<Poly>> anchor_;
  std::vector<Poly> c_;
};

using AlgebroidPtr = std::shared_ptr<const Algebroid>;

Section frame_section(const Chart& chart, std::size_t rank, std::size_t j);
Section zero_section(const Chart& chart, std::size_t rank);
Section section_add(const Section& a, const Section& b);
Section section_scale(const Poly& f, const Section& a);
Section section_embed(const Section& a, const Chart& c);
bool section_is_zero(const Section& a);

/// [a,b]^i = a^j b^k c^i_{jk} + rho(a)(b^i) - rho(b)(a^i).
Section bracket_sections(const Algebroid& P, const Section& a, const Section& b);

/// Anchor morphism and Jacobi on the frame.
Report check_axioms(const Algebroid& P);

// Library constructors. Structure constants for Lie algebras are given as
// {{j,k}, {c^1_{jk}, ..., c^n_{jk}}} with 0-based j < k.
using StructureConstants = std::map<std::pair<std::size_t, std::size_t>, std::vector<Rat>>;

AlgebroidPtr lie_algebra(std::size_t n, const StructureConstants& c);
AlgebroidPtr so3();
AlgebroidPtr heisenberg3();
AlgebroidPtr abelian(std::size_t n);
AlgebroidPtr tangent(const std::vector<std::string>& coords);
/// Action algebroid g x M from vector fields X_i = rho(e_i); throws unless
/// [X_j, X_k] = c^i_{jk} X_i.
AlgebroidPtr action(const Algebroid& g, const std::vector<PolyVectorField>& fields);
/// Rotation action of so(3) on R^3 with coordinates x,y,z.
AlgebroidPtr so3_on_r3();
/// Cotangent algebroid of the Poisson structure f d/dx ^ d/dy on R^2,
/// frame (dx, dy). `orientation` = -1 flips the anchor, which breaks the
/// anchor morphism unless f is constant.
AlgebroidPtr cotangent_poisson(const Poly& f, int orientation = 1);

}  // namespace weil
