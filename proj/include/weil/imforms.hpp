#pragma once

#include <cstdint>
#include <vector>

#include "weil/intrinsic.hpp"

namespace weil {

/// A C^inf(M)-linear map Gamma(A) -> Omega^{deg}(M), stored on the frame:
/// values[i] is the image of e_i, a form of degree `deg` on the base chart.
struct FrameMap {
  int deg = 0;
  std::vector<PolyForm> values;

  PolyForm operator()(const Section& a) const;
};

/// Frame map reading each e_i as the covector e^i, i.e. the identity
/// T^*M -> T^*M for the cotangent algebroid of a Poisson structure.
FrameMap identity_covectors(const Algebroid& P);

/// A (0,q) element of W(A) from a q-form on the base: dx^a -> d^a.
WeilElement form_element(AlgebroidPtr P, const PolyForm& w);

/// Equations for tau relative to phi on frame pairs (including equal pairs)
/// and on `samples` seeded sections with polynomial coefficients.
/// i_{rho(a) ^ rho(b)} is read as i_{rho(b)} i_{rho(a)}.
Report check_im(const Algebroid& P, const FrameMap& tau, const PolyForm& phi, std::uint64_t seed = 0,
                unsigned samples = 4);

/// The element sigma of W^{1,k} with sigma_1 = tau and
/// sigma_0(a) = i_{rho(a)} phi - d tau(a), k = tau.deg + 1.
WeilElement cocycle_from_tau(AlgebroidPtr P, const FrameMap& tau, const PolyForm& phi);

/// Level-one part of a W^{1,k} element as a frame map of degree k - 1.
FrameMap level_one(AlgebroidPtr P, const WeilElement& w, int k);

/// check_im verdict against "d^v sigma + d^h phi = 0 and d^h sigma = 0" with
/// sigma = cocycle_from_tau; a finding records whether the verdicts agree.
Report int_pr_equivalence(AlgebroidPtr P, const FrameMap& tau, const PolyForm& phi, std::uint64_t seed = 0,
                          unsigned samples = 4);

/// Rebuilds a (1,k) element from its level-one component, given that
/// d^v sigma + d^h phi = 0. Throws otherwise.
WeilElement c1_determines(AlgebroidPtr P, const WeilElement& sigma, int k, const PolyForm& phi);

/// Transgression equations for l of degree k - 2 against tau (which must be
/// an IM form relative to phi = 0), with c_omega(a,b) = -i_{rho(b)} tau(a).
/// Also builds xi in W^{1,k-1} (xi_1 = l, xi_0 = tau - d l) and checks
/// d^v xi = sigma, d^h xi = 0; a finding records whether the routes agree.
Report check_transgression(AlgebroidPtr P, const FrameMap& l, const FrameMap& tau, std::uint64_t seed = 0,
                           unsigned samples = 4);
WeilElement xi_from_l(AlgebroidPtr P, const FrameMap& l, const FrameMap& tau);

}  // namespace weil
