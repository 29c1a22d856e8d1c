#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weil/intrinsic.hpp"

namespace weil {

/// A split polynomial groupoid over an affine chart M: arrows are (u; x) with
/// source s(u; x) = x. Structure maps are given on nerve charts:
///   target  : m polynomials on G_1 = (u0..; x1..)
///   unit    : d polynomials on M (fiber coordinate of 1_x)
///   mult    : d polynomials on G_2 = (u0..; u1..; x2..), fiber of g*h for
///             g = (u0; t(u1; x2)), h = (u1; x2)
///   inverse : d polynomials on G_1, fiber of g^-1 (whose source is t(g))
/// Nerve coordinates: arrow i of G_p uses fiber names suffixed by i-1, the
/// base point x_p uses base names suffixed by p; G_0 is M itself.
class SplitGroupoid {
 public:
  SplitGroupoid(std::vector<std::string> base, std::vector<std::string> fiber, std::vector<Poly> target,
                std::vector<Poly> unit, std::vector<Poly> mult, std::vector<Poly> inverse);
  /// Parses the four maps from strings over the corresponding charts.
  static SplitGroupoid parse(std::vector<std::string> base, std::vector<std::string> fiber,
                             const std::vector<std::string>& target, const std::vector<std::string>& unit,
                             const std::vector<std::string>& mult, const std::vector<std::string>& inverse);

  const Chart& object_chart() const { return object_; }
  std::size_t dim() const { return object_.size(); }
  std::size_t fiber_dim() const { return fiber_.size(); }
  const std::vector<std::string>& fiber_names() const { return fiber_; }
  const std::vector<Poly>& target() const { return target_; }
  const std::vector<Poly>& unit() const { return unit_; }
  const std::vector<Poly>& mult() const { return mult_; }
  const std::vector<Poly>& inverse() const { return inverse_; }

  Chart nerve_chart(int p) const;
  /// Index in nerve_chart(p) of fiber coordinate c of arrow i (1-based).
  std::size_t fiber_index(int /*p*/, int i, std::size_t c) const { return (i - 1) * fiber_.size() + c; }
  std::size_t base_index(int p, std::size_t a) const { return p == 0 ? a : p * fiber_.size() + a; }
  /// x_0, ..., x_p as polynomials on nerve_chart(p): x_p is the base, x_{i-1} = t(u_i; x_i).
  std::vector<std::vector<Poly>> string_points(int p) const;

 private:
  Chart object_;
  std::vector<std::string> base_, fiber_;
  std::vector<Poly> target_, unit_, mult_, inverse_;
};

/// d_i : G_p -> G_{p-1}, 0 <= i <= p, p >= 1.
PolyMap nerve_face(const SplitGroupoid& G, int p, int i);
/// s_i : G_p -> G_{p+1}, inserting a unit at place i+1, 0 <= i <= p.
PolyMap nerve_degeneracy(const SplitGroupoid& G, int p, int i);
/// x |-> x_0 as a map G_p -> M.
PolyMap nerve_target(const SplitGroupoid& G, int p);

/// A form on G_p. The form's chart is nerve_chart(level), possibly extended
/// by parameters.
struct BSForm {
  int level = 0;
  PolyForm form;
};

Report check_groupoid(const SplitGroupoid& G);
BSForm bs_delta(const SplitGroupoid& G, const BSForm& w);
bool is_normalized(const SplitGroupoid& G, const BSForm& w);
/// Projection onto the normalized subcomplex: pi_0 pi_1 ... pi_{p-1} with
/// pi_j = 1 - d_j^* s_j^*.
BSForm normalize(const SplitGroupoid& G, const BSForm& w);
/// t^*(phi) ^ w, the Omega(M)-module structure.
BSForm module_action(const SplitGroupoid& G, const PolyForm& phi, const BSForm& w);

/// alpha^p on G_p (p >= 1); for p = 0 the anchor rho(alpha) on M. The
/// section lives on M (possibly with parameters); the field lives on
/// nerve_chart(p) extended by the same parameters.
PolyVectorField right_invariant_vf(const SplitGroupoid& G, const Section& a, int p);
AlgebroidPtr lie_algebroid_of(const SplitGroupoid& G);

/// R_a(w) = s_0^*(L_{a^p} w) and J_a(w) = s_0^*(i_{a^p} w), level p -> p-1.
BSForm R_op(const SplitGroupoid& G, const Section& a, const BSForm& w);
BSForm J_op(const SplitGroupoid& G, const Section& a, const BSForm& w);
/// Lie derivative along a^p on G_p (the anchor on G_0), same level.
BSForm L_op(const SplitGroupoid& G, const Section& a, const BSForm& w);

/// V(w)_i(antisym | alpha) for normalized w at level p, as a form on the
/// evaluation chart of `ctx` (which must come from lie_algebroid_of(G)).
PolyForm vanest_component(const SplitGroupoid& G, const EvalContext& ctx, const BSForm& w,
                          const std::vector<Section>& antisym, int level);
/// V(w) in flat coordinates. w must be normalized and homogeneous.
WeilElement vanest(const SplitGroupoid& G, const EvalContext& ctx, const BSForm& w);

/// d_1^* w = d_0^* w + d_2^* w and, if phi is given, d w = s^* phi - t^* phi.
Report multiplicative_check(const SplitGroupoid& G, const PolyForm& w, const std::optional<PolyForm>& phi);

// Library.
SplitGroupoid pair_groupoid(const std::vector<std::string>& base);
/// (R,+) acting on R by translation.
SplitGroupoid translation_groupoid();
/// (R,+) acting on R^2 by the shear (x, y) -> (x, y + u x).
SplitGroupoid shear_groupoid();
/// Unipotent 3x3 matrices over a point.
SplitGroupoid heisenberg_group();

}  // namespace weil
