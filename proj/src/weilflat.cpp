#include "weil/weilflat.hpp"

#include <functional>

namespace weil {

bool WeilKeyLess::operator()(const WeilKey& a, const WeilKey& b) const {
  int pa = a.p(), pb = b.p();
  if (pa != pb) return pa < pb;
  int qa = a.q(), qb = b.q();
  if (qa != qb) return qa < qb;
  MaskLess ml;
  if (a.D != b.D) return ml(a.D, b.D);
  if (a.T != b.T) return ml(a.T, b.T);
  return a.e > b.e;  // mu1 before mu2 in printing
}

// ---------------------------------------------------------------- construction

static void check_rank(const Algebroid& P, const WeilKey& k) {
  if (k.e.size() != P.rank()) throw DomainError("Weil key: mu exponent length must equal rank");
  if (P.dim() < 64 && (k.D >> P.dim()) != 0) throw DomainError("Weil key: d-index out of range");
  if (P.rank() < 64 && (k.T >> P.rank()) != 0) throw DomainError("Weil key: theta-index out of range");
}

WeilElement WeilElement::term(AlgebroidPtr P, WeilKey k, const Poly& coeff) {
  WeilElement w(std::move(P));
  w.add_term(k, coeff);
  return w;
}

WeilElement WeilElement::function(AlgebroidPtr P, const Poly& f) {
  WeilKey k{0, 0, Exponents(P->rank(), 0)};
  return term(std::move(P), k, f);
}

WeilElement WeilElement::dgen(AlgebroidPtr P, std::size_t a) {
  if (a >= P->dim()) throw DomainError("dgen: index out of range");
  WeilKey k{Mask(1) << a, 0, Exponents(P->rank(), 0)};
  Poly one(P->base(), 1);
  return term(std::move(P), k, one);
}

WeilElement WeilElement::theta(AlgebroidPtr P, std::size_t i) {
  if (i >= P->rank()) throw DomainError("theta: index out of range");
  WeilKey k{0, Mask(1) << i, Exponents(P->rank(), 0)};
  Poly one(P->base(), 1);
  return term(std::move(P), k, one);
}

WeilElement WeilElement::mu(AlgebroidPtr P, std::size_t i) {
  if (i >= P->rank()) throw DomainError("mu: index out of range");
  Exponents e(P->rank(), 0);
  e[i] = 1;
  WeilKey k{0, 0, e};
  Poly one(P->base(), 1);
  return term(std::move(P), k, one);
}

void WeilElement::add_term(const WeilKey& k, const Poly& c) {
  if (!P_) throw DomainError("Weil element without presentation");
  check_rank(*P_, k);
  if (c.chart() != P_->base()) throw DomainError("Weil element: coefficient not on the base chart");
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

static void require_same(const WeilElement& a, const WeilElement& b) {
  if (a.presentation() != b.presentation() && !(a.alg() == b.alg()))
    throw DomainError("Weil elements over different presentations");
}

WeilElement WeilElement::operator-() const {
  WeilElement r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

WeilElement& WeilElement::operator+=(const WeilElement& o) {
  require_same(*this, o);
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

WeilElement& WeilElement::operator-=(const WeilElement& o) { return *this += -o; }

WeilElement operator*(const Rat& c, const WeilElement& a) {
  WeilElement r(a.P_);
  if (c == 0) return r;
  r = a;
  for (auto& [k, p] : r.terms_) p *= c;
  return r;
}

WeilElement operator*(const Poly& f, const WeilElement& a) {
  WeilElement r(a.P_);
  for (const auto& [k, p] : a.terms_) r.add_term(k, f * p);
  return r;
}

bool WeilElement::operator==(const WeilElement& o) const {
  require_same(*this, o);
  return terms_ == o.terms_;
}

WeilElement WeilElement::part(int p, int q) const {
  WeilElement r(P_);
  for (const auto& [k, c] : terms_)
    if (k.p() == p && k.q() == q) r.terms_.emplace(k, c);
  return r;
}

std::vector<std::pair<int, int>> WeilElement::bidegrees() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& [k, c] : terms_) {
    std::pair<int, int> b{k.p(), k.q()};
    if (out.empty() || out.back() != b) out.push_back(b);
  }
  return out;
}

std::string WeilElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    std::vector<std::string> gens;
    for (Mask m = k.D; m; m &= m - 1) gens.push_back("d" + P_->base().name(__builtin_ctzll(m)));
    for (Mask m = k.T; m; m &= m - 1) gens.push_back("th" + std::to_string(__builtin_ctzll(m) + 1));
    for (std::size_t i = 0; i < k.e.size(); ++i)
      if (k.e[i]) gens.push_back("mu" + std::to_string(i + 1) + (k.e[i] > 1 ? "^" + std::to_string(k.e[i]) : ""));
    std::string coef;
    bool neg = false;
    if (c.terms().size() == 1) {
      Poly a = c;
      if (c.terms()[0].second < 0) {
        neg = true;
        a = -c;
      }
      coef = a.to_string();
      if (!gens.empty() && coef == "1") coef.clear();
    } else {
      coef = "(" + c.to_string() + ")";
    }
    out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    std::string body = coef;
    for (const auto& g : gens) body += (body.empty() ? "" : "*") + g;
    out += body;
  }
  return out;
}

// ---------------------------------------------------------------- product

namespace {

bool mul_keys(const WeilKey& a, const WeilKey& b, WeilKey& out, int& sign) {
  int s1 = shuffle_sign(a.D, b.D);
  int s2 = shuffle_sign(a.T, b.T);
  if (!s1 || !s2) return false;
  sign = s1 * s2 * (((popcount(a.T) * popcount(b.D)) & 1) ? -1 : 1);
  out.D = a.D | b.D;
  out.T = a.T | b.T;
  out.e = a.e;
  for (std::size_t i = 0; i < out.e.size(); ++i) out.e[i] += b.e[i];
  return true;
}

}  // namespace

WeilElement operator*(const WeilElement& a, const WeilElement& b) {
  require_same(a, b);
  WeilElement r(a.presentation());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      WeilKey k;
      int s;
      if (!mul_keys(ka, kb, k, s)) continue;
      Poly c = ca * cb;
      r.add_term(k, s < 0 ? -c : c);
    }
  return r;
}

// ---------------------------------------------------------------- derivations

namespace {

enum class Gen { dgen, theta, mu };

// An odd derivation given by its action on functions and generators.
struct Derivation {
  std::function<WeilElement(const Poly&)> on_function;
  std::vector<WeilElement> on_dgen, on_theta, on_mu;
};

WeilElement apply(const Derivation& X, const WeilElement& w) {
  const AlgebroidPtr& P = w.presentation();
  WeilElement r(P);
  const std::size_t n = P->rank();
  for (const auto& [k, c] : w.terms()) {
    // Monomial factors in normal order.
    std::vector<std::pair<Gen, std::size_t>> gens;
    for (Mask m = k.D; m; m &= m - 1) gens.emplace_back(Gen::dgen, __builtin_ctzll(m));
    for (Mask m = k.T; m; m &= m - 1) gens.emplace_back(Gen::theta, __builtin_ctzll(m));
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned t = 0; t < k.e[i]; ++t) gens.emplace_back(Gen::mu, i);

    WeilElement mono = WeilElement::term(P, k, Poly(P->base(), 1));
    if (X.on_function) {
      WeilElement df = X.on_function(c);
      if (!df.is_zero()) r += df * mono;
    }
    // Leibniz across the factors; an odd derivation picks up the parity of
    // everything to its left.
    WeilElement prefix = WeilElement::function(P, Poly(P->base(), 1));
    int left_parity = 0;
    for (std::size_t s = 0; s < gens.size(); ++s) {
      auto [g, idx] = gens[s];
      const WeilElement& img = g == Gen::dgen ? X.on_dgen[idx] : g == Gen::theta ? X.on_theta[idx] : X.on_mu[idx];
      WeilElement gen = g == Gen::dgen ? WeilElement::dgen(P, idx)
                        : g == Gen::theta ? WeilElement::theta(P, idx)
                                          : WeilElement::mu(P, idx);
      if (!img.is_zero()) {
        WeilElement suffix = WeilElement::function(P, Poly(P->base(), 1));
        for (std::size_t t = s + 1; t < gens.size(); ++t) {
          auto [g2, i2] = gens[t];
          suffix = suffix * (g2 == Gen::dgen ? WeilElement::dgen(P, i2)
                             : g2 == Gen::theta ? WeilElement::theta(P, i2)
                                                : WeilElement::mu(P, i2));
        }
        WeilElement piece = prefix * img * suffix;
        if (left_parity) piece = -piece;
        r += c * piece;
      }
      prefix = prefix * gen;
      if (g != Gen::mu) left_parity ^= 1;
    }
  }
  return r;
}

Derivation make_dv(const AlgebroidPtr& P) {
  Derivation X;
  X.on_function = [P](const Poly& f) {
    WeilElement r(P);
    for (std::size_t a = 0; a < P->dim(); ++a) r += f.partial(a) * WeilElement::dgen(P, a);
    return r;
  };
  for (std::size_t a = 0; a < P->dim(); ++a) X.on_dgen.emplace_back(P);
  for (std::size_t i = 0; i < P->rank(); ++i) {
    X.on_theta.push_back(WeilElement::mu(P, i));
    X.on_mu.emplace_back(P);
  }
  return X;
}

Derivation make_dh(const AlgebroidPtr& P) {
  const Algebroid& A = *P;
  const std::size_t n = A.rank(), m = A.dim();
  const Chart& ch = A.base();
  Derivation X;
  X.on_function = [P, n, m](const Poly& f) {
    WeilElement r(P);
    for (std::size_t a = 0; a < m; ++a) {
      Poly fa = f.partial(a);
      if (fa.is_zero()) continue;
      for (std::size_t i = 0; i < n; ++i)
        if (!P->anchor(i, a).is_zero()) r += (fa * P->anchor(i, a)) * WeilElement::theta(P, i);
    }
    return r;
  };
  const Rat half(1, 2);
  // d^h(d^a) = -rho^a_i mu^i + d_b rho^a_i theta^i d^b
  for (std::size_t a = 0; a < m; ++a) {
    WeilElement r(P);
    for (std::size_t i = 0; i < n; ++i) {
      const Poly& rho = A.anchor(i, a);
      if (rho.is_zero()) continue;
      r -= rho * WeilElement::mu(P, i);
      for (std::size_t b = 0; b < m; ++b) {
        Poly drho = rho.partial(b);
        if (!drho.is_zero()) r += drho * (WeilElement::theta(P, i) * WeilElement::dgen(P, b));
      }
    }
    X.on_dgen.push_back(r);
  }
  // d^h(theta^i) = -1/2 c^i_{jk} theta^j theta^k
  for (std::size_t i = 0; i < n; ++i) {
    WeilElement r(P);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!A.c(i, j, k).is_zero())
          r -= half * (A.c(i, j, k) * (WeilElement::theta(P, j) * WeilElement::theta(P, k)));
    X.on_theta.push_back(r);
  }
  // d^h(mu^i) = -c^i_{jk} theta^j mu^k + 1/2 d_a c^i_{jk} theta^j theta^k d^a
  for (std::size_t i = 0; i < n; ++i) {
    WeilElement r(P);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const Poly& cijk = A.c(i, j, k);
        if (cijk.is_zero()) continue;
        r -= cijk * (WeilElement::theta(P, j) * WeilElement::mu(P, k));
        for (std::size_t a = 0; a < m; ++a) {
          Poly dc = cijk.partial(a);
          if (!dc.is_zero())
            r += half * (dc * (WeilElement::theta(P, j) * WeilElement::theta(P, k) * WeilElement::dgen(P, a)));
        }
      }
    X.on_mu.push_back(r);
  }
  (void)ch;
  return X;
}

}  // namespace

WeilElement weil_dv(const WeilElement& w) { return apply(make_dv(w.presentation()), w); }

WeilElement weil_dh(const WeilElement& w) { return apply(make_dh(w.presentation()), w); }

WeilElement weil_interior(const Section& a, const WeilElement& w) {
  const AlgebroidPtr& P = w.presentation();
  if (a.size() != P->rank()) throw DomainError("weil_interior: section has wrong rank");
  Derivation X;
  for (std::size_t b = 0; b < P->dim(); ++b) X.on_dgen.emplace_back(P);
  for (std::size_t i = 0; i < P->rank(); ++i) {
    X.on_theta.push_back(WeilElement::function(P, a[i].embed(P->base())));
    X.on_mu.emplace_back(P);
  }
  return apply(X, w);
}

WeilElement weil_lie(const Section& a, const WeilElement& w) {
  return weil_dh(weil_interior(a, w)) + weil_interior(a, weil_dh(w));
}

// ---------------------------------------------------------------- random / keys

std::vector<WeilKey> weil_keys(const Algebroid& P, int p, int q) {
  std::vector<WeilKey> out;
  const std::size_t n = P.rank(), m = P.dim();
  if (p < 0 || q < 0) return out;
  for (int s = 0; s <= std::min(p, q); ++s) {
    int t = p - s, d = q - s;
    if (t > static_cast<int>(n) || d > static_cast<int>(m)) continue;
    // Multi-indices of total degree s.
    std::vector<Exponents> es;
    Exponents e(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i + 1 >= n) {
        if (n == 0) {
          if (left == 0) es.push_back(e);
          return;
        }
        e[n - 1] = static_cast<std::uint16_t>(left);
        es.push_back(e);
        e[n - 1] = 0;
        return;
      }
      for (int v = left; v >= 0; --v) {
        e[i] = static_cast<std::uint16_t>(v);
        rec(i + 1, left - v);
      }
      e[i] = 0;
    };
    rec(0, s);
    for (Mask D = 0; D < (Mask(1) << m); ++D) {
      if (popcount(D) != d) continue;
      for (Mask T = 0; T < (Mask(1) << n); ++T) {
        if (popcount(T) != t) continue;
        for (const auto& ee : es) out.push_back({D, T, ee});
      }
    }
  }
  return out;
}

WeilElement random_weil(Rng& rng, AlgebroidPtr P, int maxp, int maxq, bool homogeneous, unsigned maxdeg,
                        unsigned terms) {
  WeilElement w(P);
  unsigned count = 1 + static_cast<unsigned>(rng.below(terms));
  for (unsigned t = 0; t < count; ++t) {
    int p = homogeneous ? maxp : static_cast<int>(rng.below(maxp + 1));
    int q = homogeneous ? maxq : static_cast<int>(rng.below(maxq + 1));
    auto keys = weil_keys(*P, p, q);
    if (keys.empty()) continue;
    w.add_term(keys[rng.below(keys.size())], random_poly(rng, P->base(), maxdeg, 2));
  }
  return w;
}

// ---------------------------------------------------------------- checks

Report check_d2(AlgebroidPtr P, std::uint64_t seed, unsigned samples) {
  Report rep;
  std::vector<std::pair<std::string, WeilElement>> probes;
  for (std::size_t a = 0; a < P->dim(); ++a) {
    probes.emplace_back(P->base().name(a), WeilElement::function(P, Poly::variable(P->base(), a)));
    probes.emplace_back("d" + P->base().name(a), WeilElement::dgen(P, a));
  }
  for (std::size_t i = 0; i < P->rank(); ++i) {
    probes.emplace_back("th" + std::to_string(i + 1), WeilElement::theta(P, i));
    probes.emplace_back("mu" + std::to_string(i + 1), WeilElement::mu(P, i));
  }
  Rng rng(seed);
  for (unsigned s = 0; s < samples; ++s)
    probes.emplace_back("random#" + std::to_string(s), random_weil(rng, P, 2, 2, false));

  auto check = [&](const std::string& what, const std::string& name, const WeilElement& v) {
    rep.add(what + " on " + name, v.is_zero(), v.is_zero() ? "" : "nonzero: " + v.to_string());
  };
  for (const auto& [name, w] : probes) {
    WeilElement v = weil_dv(w), h = weil_dh(w);
    check("dv^2", name, weil_dv(v));
    check("dh^2", name, weil_dh(h));
    check("dv dh + dh dv", name, weil_dv(h) + weil_dh(v));
  }
  return rep;
}

Report check_cartan(const Section& a, const Section& b, const WeilElement& w) {
  Report rep;
  const Algebroid& P = w.alg();
  auto chk = [&](const std::string& name, const WeilElement& v) {
    rep.add(name, v.is_zero(), v.is_zero() ? "" : "defect: " + v.to_string());
  };
  Section ab = bracket_sections(P, a, b);
  chk("[i_a,i_b]", weil_interior(a, weil_interior(b, w)) + weil_interior(b, weil_interior(a, w)));
  chk("[L_a,i_b] - i_[a,b]",
      weil_lie(a, weil_interior(b, w)) - weil_interior(b, weil_lie(a, w)) - weil_interior(ab, w));
  chk("[L_a,L_b] - L_[a,b]", weil_lie(a, weil_lie(b, w)) - weil_lie(b, weil_lie(a, w)) - weil_lie(ab, w));
  return rep;
}

}  // namespace weil
