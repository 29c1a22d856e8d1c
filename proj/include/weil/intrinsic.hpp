#pragma once

#include <functional>
#include <string>
#include <vector>

#include "weil/weilflat.hpp"

namespace weil {

/// Evaluation chart for component sequences: the base chart extended by
/// formal parameters lambda_1..lambda_n (plus optional extras), and the formal
/// section alpha = sum_j lambda_j e_j that fills the symmetric slot.
class EvalContext {
 public:
  explicit EvalContext(AlgebroidPtr P, const std::vector<std::string>& extra_params = {});

  const AlgebroidPtr& presentation() const { return P_; }
  const Chart& chart() const { return E_; }
  /// The presentation with coefficients moved to chart().
  const Algebroid& ext() const { return PE_; }
  const Section& alpha() const { return alpha_; }
  /// Index of lambda_j in chart().
  std::size_t lambda_index(std::size_t j) const { return P_->dim() + j; }
  Section frame(std::size_t j) const { return frame_section(E_, P_->rank(), j); }
  /// Moves a section onto chart().
  Section lift(const Section& s) const { return section_embed(s, E_); }
  /// Directional derivative of a lambda-polynomial form along `gamma`:
  /// sum_j gamma^j d/dlambda_j.
  PolyForm sym_derivative(const Section& gamma, const PolyForm& P) const;

 private:
  AlgebroidPtr P_;
  Chart E_;
  Algebroid PE_;
  Section alpha_;
};

/// c_i(antisym | sym) of a homogeneous element of bidegree (p,q):
/// antisym has p - i sections, sym fills the symmetric slot. Every section
/// lives on ctx.chart().
PolyForm eval_component(const EvalContext& ctx, const WeilElement& w, const std::vector<Section>& antisym,
                        const Section& sym, int level);
/// Same with sym = the formal alpha.
PolyForm eval_component(const EvalContext& ctx, const WeilElement& w, const std::vector<Section>& antisym,
                        int level);

/// Component k of d^v c computed only from components of c.
PolyForm intrinsic_dv_component(const EvalContext& ctx, const WeilElement& w, const std::vector<Section>& antisym,
                                int level);
/// Component k of d^h c computed only from components of c (Koszul formula
/// with the symmetric-power representation).
PolyForm intrinsic_dh_component(const EvalContext& ctx, const WeilElement& w, const std::vector<Section>& antisym,
                                int level);

/// Rebuilds a flat element of bidegree (p,q) from its values on increasing
/// frame tuples: `values(T, k)` must return c_k(e_T | alpha) for |T| = p - k.
WeilElement reconstruct_from_frame(const EvalContext& ctx, int p, int q,
                                   const std::function<PolyForm(Mask, int)>& values);

/// c_i(.., f a_last) = f c_i(..) - df ^ d_{a_last} c_{i+1}(..) at every level.
Report leibniz_check(const EvalContext& ctx, const WeilElement& w, const std::vector<Section>& sections,
                     const Poly& f);

/// Whether level-0 components agree on all tuples drawn from
/// {e_j} u {x_a e_j}. Requires equal bidegree with q <= dim M.
bool body_determinacy(const EvalContext& ctx, const WeilElement& w, const WeilElement& w2);

/// Connection coefficients: nabla_{d_a} e_j = Gamma^i_{aj} e_i.
class Connection {
 public:
  Connection(const Algebroid& P);
  const Poly& gamma(std::size_t i, std::size_t a, std::size_t j) const { return g_[(i * m_ + a) * n_ + j]; }
  void set(std::size_t i, std::size_t a, std::size_t j, const Poly& v);

 private:
  std::size_t n_, m_;
  std::vector<Poly> g_;
};

/// The connection model shares the flat monomial shape: dx_a, e^i and the
/// symmetric generator e^i_sym are stored as d^a, theta^i, mu^i of a
/// WeilElement. I_nabla fixes d^a and theta^i and sends
/// e^i_sym to mu^i + Gamma^i_{aj} d^a theta^j.
WeilElement i_nabla(const Connection& conn, const WeilElement& source);
WeilElement i_nabla_inverse(const Connection& conn, const WeilElement& flat);
/// d_nabla = I^-1 d I for d = d^v or d^h.
WeilElement nabla_dv(const Connection& conn, const WeilElement& source);
WeilElement nabla_dh(const Connection& conn, const WeilElement& source);

}  // namespace weil
