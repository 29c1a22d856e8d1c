#include <doctest.h>

#include "weil/polyforms.hpp"
#include "weil/randgen.hpp"

using namespace weil;

TEST_CASE("form parse and print") {
  Chart c({"x", "y", "z"});
  PolyForm f = parse_form("x*y dx^dy + 1 dz", c);
  CHECK(f.to_string() == "dz + x*y dx^dy");
  CHECK(parse_form("dy^dx", c) == -parse_form("dx^dy", c));
  CHECK(parse_form("dx^dx", c).is_zero());
  CHECK(parse_form("(x - 1) dx - 3*y dz + x^2", c).to_string() == "x^2 + (x - 1) dx - 3*y dz");
  PolyForm g = parse_form("(x - 1) dx - 3*y dz + x^2 + 2*x*dy^dz", c);
  CHECK(parse_form(g.to_string(), c) == g);
  CHECK_THROWS_AS(parse_form("x dw", c), ParseError);
}

TEST_CASE("exterior calculus identities") {
  Chart c({"x", "y", "z"});
  Rng rng(11);
  for (int t = 0; t < 40; ++t) {
    int ka = static_cast<int>(rng.below(3)), kb = static_cast<int>(rng.below(3));
    PolyForm a = random_form(rng, c, ka, 3, 3), b = random_form(rng, c, kb, 3, 3);
    CHECK(ext_d(ext_d(a)).is_zero());
    // graded Leibniz and graded commutativity
    PolyForm lhs = ext_d(wedge(a, b));
    PolyForm rhs = wedge(ext_d(a), b) + ((ka & 1) ? -wedge(a, ext_d(b)) : wedge(a, ext_d(b)));
    CHECK(lhs == rhs);
    CHECK(wedge(a, b) == (((ka * kb) & 1) ? -wedge(b, a) : wedge(b, a)));
    PolyVectorField X(c, {random_poly(rng, c, 2, 2), random_poly(rng, c, 2, 2), random_poly(rng, c, 2, 2)});
    PolyVectorField Y(c, {random_poly(rng, c, 2, 2), random_poly(rng, c, 2, 2), random_poly(rng, c, 2, 2)});
    CHECK(interior(X, interior(X, a)).is_zero());
    // [L_X, i_Y] = i_[X,Y]
    CHECK(lie(X, interior(Y, a)) - interior(Y, lie(X, a)) == interior(bracket(X, Y), a));
    // [L_X, L_Y] = L_[X,Y]
    CHECK(lie(X, lie(Y, a)) - lie(Y, lie(X, a)) == lie(bracket(X, Y), a));
    CHECK(ext_d(lie(X, a)) == lie(X, ext_d(a)));
  }
}

TEST_CASE("interior contracts the first slot") {
  Chart c({"x", "y"});
  PolyVectorField dy(c, {Poly(c), Poly(c, 1)});
  CHECK(interior(dy, parse_form("dx^dy", c)) == parse_form("-dx", c));
}

TEST_CASE("pullback commutes with d and wedge") {
  Chart s({"u", "v"}), t({"x", "y", "z"});
  PolyMap F(s, t, {parse_poly("u*v", s), parse_poly("u + v^2", s), parse_poly("u^2", s)});
  CHECK(pullback(F, parse_form("dx", t)) == parse_form("v du + u dv", s));
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    PolyForm a = random_form(rng, t, static_cast<int>(rng.below(3)), 2, 2);
    PolyForm b = random_form(rng, t, 1, 2, 2);
    CHECK(pullback(F, ext_d(a)) == ext_d(pullback(F, a)));
    CHECK(pullback(F, wedge(a, b)) == wedge(pullback(F, a), pullback(F, b)));
  }
}

TEST_CASE("shuffle signs") {
  CHECK(shuffle_sign(0b01, 0b10) == 1);
  CHECK(shuffle_sign(0b10, 0b01) == -1);
  CHECK(shuffle_sign(0b110, 0b001) == 1);
  CHECK(shuffle_sign(0b100, 0b011) == 1);
  CHECK(shuffle_sign(0b010, 0b101) == -1);
  CHECK(shuffle_sign(0b1, 0b1) == 0);
}
