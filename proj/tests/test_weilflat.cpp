#include <doctest.h>

#include "weil/weilflat.hpp"

using namespace weil;

namespace {

Rat sgn(int s) { return Rat(s); }

}  // namespace

TEST_CASE("generator relations") {
  auto P = so3();
  WeilElement t1 = WeilElement::theta(P, 0), t2 = WeilElement::theta(P, 1), m1 = WeilElement::mu(P, 0);
  CHECK(t1 * t2 == -(t2 * t1));
  CHECK((t1 * t1).is_zero());
  CHECK(m1 * t1 == t1 * m1);
  CHECK(weil_dv(t1) == m1);
  CHECK(weil_dv(m1).is_zero());
  // d^h theta^3 = -theta^1 theta^2 for so(3)
  CHECK(weil_dh(WeilElement::theta(P, 2)) == -(t1 * t2));
}

TEST_CASE("graded commutativity and associativity") {
  Chart xy({"x", "y"});
  auto P = cotangent_poisson(parse_poly("1 + x^2", xy));
  Rng rng(17);
  for (int t = 0; t < 30; ++t) {
    int pa = static_cast<int>(rng.below(3)), qa = static_cast<int>(rng.below(3));
    int pb = static_cast<int>(rng.below(3)), qb = static_cast<int>(rng.below(3));
    WeilElement a = random_weil(rng, P, pa, qa, true), b = random_weil(rng, P, pb, qb, true);
    WeilElement c = random_weil(rng, P, 1, 1, false);
    int s = ((pa + qa) * (pb + qb)) & 1 ? -1 : 1;
    CHECK(a * b == sgn(s) * (b * a));
    CHECK((a * b) * c == a * (b * c));
    // d^h and d^v are derivations of total degree 1
    int sa = (pa + qa) & 1 ? -1 : 1;
    CHECK(weil_dh(a * b) == weil_dh(a) * b + sgn(sa) * (a * weil_dh(b)));
    CHECK(weil_dv(a * b) == weil_dv(a) * b + sgn(sa) * (a * weil_dv(b)));
  }
}

TEST_CASE("d^2 = 0 on the library") {
  Chart xy({"x", "y"});
  for (auto P : {so3(), heisenberg3(), tangent({"x"}), tangent({"x", "y"}), so3_on_r3(),
                 cotangent_poisson(parse_poly("x", xy)), cotangent_poisson(parse_poly("1 + x^2", xy))}) {
    Report r = check_d2(P, 0, 20);
    CHECK(r.ok);
    if (!r.ok)
      for (const auto& f : r.findings)
        if (!f.ok) MESSAGE(f.name << ": " << f.detail);
  }
}

TEST_CASE("broken structure constants are caught by d^2") {
  auto bad = lie_algebra(3, {{{0, 1}, {1, 0, 1}}, {{1, 2}, {1, 0, 0}}, {{0, 2}, {0, -1, 0}}});
  Report r = check_d2(bad, 0, 20);
  CHECK(!r.ok);
  bool found = false;
  for (const auto& f : r.findings)
    if (!f.ok && f.name.rfind("dh^2", 0) == 0) found = true;
  CHECK(found);
}

TEST_CASE("Cartan relations with constant structure functions") {
  Rng rng(23);
  for (auto P : {so3(), so3_on_r3(), tangent({"x", "y"}), cotangent_poisson(Poly(Chart({"x", "y"}), 1))}) {
    const Chart& c = P->base();
    for (int t = 0; t < 6; ++t) {
      Section a, b;
      for (std::size_t i = 0; i < P->rank(); ++i) {
        a.push_back(random_poly(rng, c, 1, 2));
        b.push_back(random_poly(rng, c, 1, 2));
      }
      WeilElement w = random_weil(rng, P, 2, 2, false);
      Report r = check_cartan(a, b, w);
      CHECK(r.ok);
    }
  }
}

TEST_CASE("[L_a, i_b] picks up derivatives of non-constant structure functions") {
  // For non-constant c the flat Lie derivative does not close on mu:
  // [L_a, i_b] mu^i - i_[a,b] mu^i = -g^j h^k d_a c^i_{jk} d^a.
  Chart xy({"x", "y"});
  auto P = cotangent_poisson(parse_poly("1 + x^2", xy));
  Section a = frame_section(xy, 2, 0), b = frame_section(xy, 2, 1);
  WeilElement m = WeilElement::mu(P, 0);
  WeilElement defect = weil_lie(a, weil_interior(b, m)) - weil_interior(b, weil_lie(a, m)) -
                       weil_interior(bracket_sections(*P, a, b), m);
  // c^1_{12} = d f/dx = 2x, so the defect is -d/dx(2x) d^x = -2 dx
  CHECK(defect == Rat(-2) * WeilElement::dgen(P, 0));
}

TEST_CASE("printing") {
  auto P = tangent({"x"});
  WeilElement w = parse_poly("x", P->base()) * (WeilElement::dgen(P, 0) * WeilElement::theta(P, 0)) +
                  Rat(-2) * WeilElement::mu(P, 0);
  CHECK(w.to_string() == "-2*mu1 + x*dx*th1");
}
