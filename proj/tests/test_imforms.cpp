#include <doctest.h>

#include "weil/imforms.hpp"
#include "weil/randgen.hpp"

using namespace weil;

namespace {

std::vector<AlgebroidPtr> bases() {
  Chart x({"x"});
  return {tangent({"x", "y"}), so3_on_r3(), cotangent_poisson(parse_poly("1 + x^2", Chart({"x", "y"}))),
          action(*lie_algebra(2, {{{0, 1}, {0, 1}}}),
                 {PolyVectorField(x, {parse_poly("-x", x)}), PolyVectorField(x, {Poly(x, 1)})})};
}

// sigma = d^h psi + d^v d^h chi satisfies d^v sigma + d^h (d psi) = 0 and d^h sigma = 0.
std::pair<WeilElement, PolyForm> constructed(Rng& rng, const AlgebroidPtr& P, int k) {
  PolyForm psi = random_form(rng, P->base(), k, 2, 2);
  WeilElement sigma = weil_dh(form_element(P, psi));
  if (k >= 1) sigma += weil_dv(weil_dh(random_weil(rng, P, 0, k - 1, true)));
  return {sigma, ext_d(psi)};
}

}  // namespace

TEST_CASE("form_element matches d^v on functions") {
  auto P = tangent({"x", "y"});
  Poly f = parse_poly("x^2*y", P->base());
  CHECK(form_element(P, ext_d(PolyForm::function(f))) == weil_dv(WeilElement::function(P, f)));
  PolyForm w = parse_form("x dx^dy", P->base());
  CHECK(weil_dv(form_element(P, w)) == form_element(P, ext_d(w)));
}

TEST_CASE("Poisson cotangent: the identity is an IM 2-form") {
  Chart xy({"x", "y"});
  for (const char* f : {"1", "x", "1 + x^2"}) {
    auto P = cotangent_poisson(parse_poly(f, xy));
    Report r = int_pr_equivalence(P, identity_covectors(*P), PolyForm(xy));
    CHECK_MESSAGE(r.ok, f);
    CHECK(r.verdict("verdicts agree"));
  }
}

TEST_CASE("zero tau relative to zero phi") {
  for (const auto& P : bases()) {
    FrameMap z{1, std::vector<PolyForm>(P->rank(), PolyForm(P->base()))};
    Report r = int_pr_equivalence(P, z, PolyForm(P->base()));
    CHECK(r.ok);
    CHECK(cocycle_from_tau(P, z, PolyForm(P->base())).is_zero());
  }
}

TEST_CASE("volume form on R^3 fails both routes") {
  auto P = tangent({"x", "y", "z"});
  FrameMap z{1, std::vector<PolyForm>(3, PolyForm(P->base()))};
  PolyForm vol = parse_form("dx^dy^dz", P->base());
  Report r = int_pr_equivalence(P, z, vol);
  CHECK(!r.ok);
  CHECK(!r.verdict("equations"));
  CHECK(!r.verdict("cocycle"));
  CHECK(r.verdict("verdicts agree"));
  CHECK_THROWS_AS(check_im(*P, z, parse_form("x dy^dz", P->base())), DomainError);
  CHECK_THROWS_AS(check_im(*P, z, parse_form("dx^dy", P->base())), DomainError);
}

TEST_CASE("constructed IM forms pass, perturbed ones fail") {
  Rng rng(17);
  for (const auto& P : bases()) {
    for (int k = 1; k <= 3; ++k) {
      if (static_cast<std::size_t>(k) > P->dim()) continue;
      for (int t = 0; t < 3; ++t) {
        auto [sigma, phi] = constructed(rng, P, k);
        FrameMap tau = level_one(P, sigma, k);
        Report r = int_pr_equivalence(P, tau, phi);
        CHECK_MESSAGE(r.ok, "k=" << k);
        CHECK(r.verdict("verdicts agree"));
        FrameMap bad = tau;
        if (k - 1 > static_cast<int>(P->dim())) continue;
        bad.values[rng.below(P->rank())] += random_form(rng, P->base(), k - 1, 1, 2);
        Report rb = int_pr_equivalence(P, bad, phi);
        if (rb.ok) continue;  // the perturbation happened to be an IM form for phi = 0
        CHECK(!rb.verdict("equations"));
        CHECK(rb.verdict("verdicts agree"));
      }
    }
  }
}

TEST_CASE("level one determines a cocycle") {
  Rng rng(29);
  for (const auto& P : bases())
    for (int k : {2, 3}) {
      if (static_cast<std::size_t>(k) > P->dim()) continue;
      for (int t = 0; t < 3; ++t) {
        auto [sigma, phi] = constructed(rng, P, k);
        if (sigma.is_zero()) continue;
        CHECK(c1_determines(P, sigma, k, phi) == sigma);
        WeilElement pert = random_weil(rng, P, 1, k, true);
        if (weil_dv(pert).is_zero()) CHECK_NOTHROW(c1_determines(P, sigma + pert, k, phi));
        else CHECK_THROWS_AS(c1_determines(P, sigma + pert, k, phi), DomainError);
      }
    }
}

TEST_CASE("transgression equations against the xi cocycle") {
  Rng rng(5);
  for (const auto& P : bases())
    for (int k = 2; k <= 3; ++k) {
      if (static_cast<std::size_t>(k - 1) > P->dim()) continue;
      for (int t = 0; t < 3; ++t) {
        WeilElement eta = random_weil(rng, P, 0, k - 1, true);
        WeilElement xi = weil_dh(eta);
        FrameMap l = level_one(P, xi, k - 1);
        FrameMap tau = level_one(P, weil_dv(xi), k);
        Report r = check_transgression(P, l, tau, 3);
        CHECK_MESSAGE(r.ok, "k=" << k);
        CHECK(xi_from_l(P, l, tau) == xi);
        FrameMap bad = l;
        bad.values[rng.below(P->rank())] += random_form(rng, P->base(), k - 2, 1, 2);
        Report rb = check_transgression(P, bad, tau, 3);
        CHECK(rb.verdict("verdicts agree"));
      }
    }
  // tau must be IM for phi = 0
  auto P = tangent({"x", "y", "z"});
  FrameMap l{0, std::vector<PolyForm>(3, PolyForm(P->base()))};
  FrameMap tau{1, {parse_form("dy", P->base()), PolyForm(P->base()), PolyForm(P->base())}};
  CHECK_THROWS_AS(check_transgression(P, l, tau), DomainError);
}
