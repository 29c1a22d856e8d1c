#pragma once

#include <memory>
#include <string>
#include <vector>

#include "weil/weilflat.hpp"

namespace weil {

/// A finite-dimensional Lie algebra g (a presentation over a point) acting on
/// an affine chart by polynomial vector fields rho(e_i).
struct LieAlgebraAction {
  AlgebroidPtr g;
  Chart chart;
  std::vector<PolyVectorField> fields;

  std::size_t rank() const { return g->rank(); }
  /// Jacobi for the constants and [rho(e_j), rho(e_k)] = c^i_{jk} rho(e_i).
  Report certify() const;
};
using ActionPtr = std::shared_ptr<const LieAlgebraAction>;

ActionPtr make_action(AlgebroidPtr g, Chart chart, std::vector<PolyVectorField> fields);
/// so(3) rotating R^3 (coordinates x, y, z).
ActionPtr so3_rotations();
/// n-dimensional abelian algebra acting trivially on `chart`.
ActionPtr trivial_action(std::size_t n, const Chart& chart);

/// Element of W(g; Omega(chart)) = Lambda(g*; S(g*, Omega)). The value on the
/// increasing frame tuple e_T (T a mask of antisymmetric slots) is a form on
/// eval_chart() = chart + lambda_1..lambda_n; its lambda-degree-k part is the
/// symmetric slot P(alpha, ..., alpha) at alpha = sum lambda_j e_j.
class KalkmanElement {
 public:
  using Comps = std::map<Mask, PolyForm, MaskLess>;

  explicit KalkmanElement(ActionPtr act);
  static KalkmanElement value(ActionPtr act, Mask T, const PolyForm& v);
  /// The generators: theta^i (one slot, value 1), mu^i (value lambda_i), and a
  /// form on the acted-on chart.
  static KalkmanElement theta(ActionPtr act, std::size_t i);
  static KalkmanElement mu(ActionPtr act, std::size_t i);
  static KalkmanElement form(ActionPtr act, const PolyForm& w);

  const ActionPtr& action() const { return act_; }
  const Chart& eval_chart() const { return E_; }
  const Comps& comps() const { return comps_; }
  PolyForm at(Mask T) const;
  bool is_zero() const { return comps_.empty(); }

  void add(Mask T, const PolyForm& v);
  KalkmanElement operator-() const;
  KalkmanElement& operator+=(const KalkmanElement& o);
  KalkmanElement& operator-=(const KalkmanElement& o);
  friend KalkmanElement operator+(KalkmanElement a, const KalkmanElement& b) { return a += b; }
  friend KalkmanElement operator-(KalkmanElement a, const KalkmanElement& b) { return a -= b; }
  friend KalkmanElement operator*(const Rat& c, const KalkmanElement& a);
  /// Shuffle product with the (-1)^{q p'} sign.
  friend KalkmanElement operator*(const KalkmanElement& a, const KalkmanElement& b);
  bool operator==(const KalkmanElement& o) const { return comps_ == o.comps_; }

  std::string to_string() const;

 private:
  ActionPtr act_;
  Chart E_;
  Comps comps_;
};

Chart kalkman_chart(const LieAlgebraAction& act);
/// alpha = sum lambda_j e_j pushed through the action, on the evaluation chart.
PolyVectorField formal_field(const LieAlgebraAction& act);

enum class Rep { trivial, forms, sym };
/// L_{e_a} on values: `trivial` is zero, `forms` is L_{rho(e_a)}, `sym` adds
/// the coadjoint term -d_{[e_a, alpha]} on the lambda variables.
PolyForm rep_lie(const LieAlgebraAction& act, Rep rep, std::size_t a, const PolyForm& v);
/// Chevalley-Eilenberg differential (Koszul formula) with values in `rep`.
KalkmanElement ce_delta(const KalkmanElement& c, Rep rep = Rep::sym);

/// Directional derivative in the symmetric slot: sum_j a^j d/dlambda_j.
/// Throws unless v is lambda-homogeneous of degree >= 1.
PolyForm sym_partial(const LieAlgebraAction& act, const PolyForm& v, const std::vector<Rat>& a);
/// The symmetric multilinear value P(v_1, ..., v_k) of a lambda-homogeneous
/// degree-k form.
PolyForm polarize(const LieAlgebraAction& act, const PolyForm& v, const std::vector<std::vector<Rat>>& args);

KalkmanElement kalkman_i_A(const KalkmanElement& c);
KalkmanElement kalkman_d_A(const KalkmanElement& c);
KalkmanElement kalkman_i_g(const KalkmanElement& c);
KalkmanElement kalkman_dh(const KalkmanElement& c);
KalkmanElement kalkman_dv(const KalkmanElement& c);

/// W(g) (flat, over a point) tensor a form, mapped into W(g; Omega).
KalkmanElement from_weil(const ActionPtr& act, const WeilElement& w, const PolyForm& a);

/// d_G(P) = d P + i_{rho(alpha)} P on S(g*) tensor Omega (lambda-encoded).
PolyForm cartan_differential(const LieAlgebraAction& act, const PolyForm& P);
/// L_{e_a} P = 0 for every frame element, in the sym representation.
bool is_invariant(const LieAlgebraAction& act, const PolyForm& P);

/// Checks delta = d^h_W x 1 + theta^a x L_a, i_A = -mu^a x i_a,
/// d_A = 1 x d, i_g = d^v_W x 1 on products (W(g) monomial) x (form) with
/// W-bidegree up to (maxp, maxq) and form coefficients of degree <= 1.
Report decomposition_check(const ActionPtr& act, int maxp = 2, int maxq = 2);

KalkmanElement random_kalkman(Rng& rng, const ActionPtr& act, int slots, int k, int formdeg, unsigned terms = 2);

}  // namespace weil
