#include "weil/groupoid.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace weil {

namespace {

int sign_pow(int k) { return (k & 1) ? -1 : 1; }

std::vector<std::string> param_names(const Chart& c) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.is_param(i)) out.push_back(c.name(i));
  return out;
}

Chart with_params(const Chart& c, const std::vector<std::string>& params) {
  std::vector<std::string> fresh;
  for (const auto& p : params)
    if (!c.index_of(p)) fresh.push_back(p);
  return fresh.empty() ? c : chart_extend(c, fresh);
}

std::vector<std::string> merge_params(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& x : b)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- structure

SplitGroupoid::SplitGroupoid(std::vector<std::string> base, std::vector<std::string> fiber, std::vector<Poly> target,
                             std::vector<Poly> unit, std::vector<Poly> mult, std::vector<Poly> inverse)
    : object_(base), base_(std::move(base)), fiber_(std::move(fiber)) {
  Chart g1 = nerve_chart(1), g2 = nerve_chart(2);
  nerve_chart(4);  // rejects naming schemes that collide at higher levels
  auto take = [](std::vector<Poly> v, const Chart& c, std::size_t n, const char* what) {
    if (v.size() != n) throw DomainError(std::string("groupoid: wrong number of ") + what + " components");
    for (auto& p : v) p = p.embed(c);
    return v;
  };
  target_ = take(std::move(target), g1, base_.size(), "target");
  unit_ = take(std::move(unit), object_, fiber_.size(), "unit");
  mult_ = take(std::move(mult), g2, fiber_.size(), "mult");
  inverse_ = take(std::move(inverse), g1, fiber_.size(), "inverse");
}

SplitGroupoid SplitGroupoid::parse(std::vector<std::string> base, std::vector<std::string> fiber,
                                   const std::vector<std::string>& target, const std::vector<std::string>& unit,
                                   const std::vector<std::string>& mult, const std::vector<std::string>& inverse) {
  auto nerve = [&](int p) {
    if (p == 0) return Chart(base);
    std::vector<std::string> names;
    for (int i = 1; i <= p; ++i)
      for (const auto& f : fiber) names.push_back(f + std::to_string(i - 1));
    for (const auto& b : base) names.push_back(b + std::to_string(p));
    return Chart(names);
  };
  auto conv = [](const std::vector<std::string>& src, const Chart& c) {
    std::vector<Poly> out;
    for (const auto& s : src) out.push_back(parse_poly(s, c));
    return out;
  };
  Chart g1 = nerve(1), g2 = nerve(2), M = nerve(0);
  return SplitGroupoid(base, fiber, conv(target, g1), conv(unit, M), conv(mult, g2), conv(inverse, g1));
}

Chart SplitGroupoid::nerve_chart(int p) const {
  if (p < 0) throw DomainError("nerve_chart: negative level");
  if (p == 0) return object_;
  std::vector<std::string> names;
  for (int i = 1; i <= p; ++i)
    for (const auto& f : fiber_) names.push_back(f + std::to_string(i - 1));
  for (const auto& b : base_) names.push_back(b + std::to_string(p));
  return Chart(names);
}

std::vector<std::vector<Poly>> SplitGroupoid::string_points(int p) const {
  Chart gp = nerve_chart(p), g1 = nerve_chart(1);
  const std::size_t d = fiber_.size(), m = base_.size();
  std::vector<std::vector<Poly>> x(p + 1);
  for (std::size_t a = 0; a < m; ++a) x[p].push_back(Poly::variable(gp, base_index(p, a)));
  for (int i = p; i >= 1; --i) {
    std::vector<Poly> comps;
    for (std::size_t c = 0; c < d; ++c) comps.push_back(Poly::variable(gp, fiber_index(p, i, c)));
    for (std::size_t a = 0; a < m; ++a) comps.push_back(x[i][a]);
    PolyMap F(gp, g1, comps);
    for (std::size_t a = 0; a < m; ++a) x[i - 1].push_back(substitute(target_[a], F));
  }
  return x;
}

// ---------------------------------------------------------------- simplicial maps

namespace {

std::vector<Poly> unit_at(const SplitGroupoid& G, const Chart& src, const std::vector<Poly>& point) {
  PolyMap F(src, G.object_chart(), point);
  std::vector<Poly> out;
  for (const auto& u : G.unit()) out.push_back(substitute(u, F));
  return out;
}

}  // namespace

PolyMap nerve_face(const SplitGroupoid& G, int p, int i) {
  if (p < 1 || i < 0 || i > p) throw DomainError("nerve_face: index out of range");
  Chart gp = G.nerve_chart(p), tgt = G.nerve_chart(p - 1);
  const std::size_t d = G.fiber_dim(), m = G.dim();
  auto x = G.string_points(p);
  auto fib = [&](int arrow) {
    std::vector<Poly> v;
    for (std::size_t c = 0; c < d; ++c) v.push_back(Poly::variable(gp, G.fiber_index(p, arrow, c)));
    return v;
  };
  std::vector<Poly> comps;
  for (int k = 1; k <= p; ++k) {
    if (i == 0) {
      if (k == 1) continue;
      auto v = fib(k);
      comps.insert(comps.end(), v.begin(), v.end());
      continue;
    }
    if (i == p) {
      if (k == p) continue;
      auto v = fib(k);
      comps.insert(comps.end(), v.begin(), v.end());
      continue;
    }
    if (k == i) {
      // merged arrow g_i g_{i+1}
      std::vector<Poly> sub = fib(i);
      auto v2 = fib(i + 1);
      sub.insert(sub.end(), v2.begin(), v2.end());
      sub.insert(sub.end(), x[i + 1].begin(), x[i + 1].end());
      PolyMap F(gp, G.nerve_chart(2), sub);
      for (const auto& mc : G.mult()) comps.push_back(substitute(mc, F));
    } else if (k == i + 1) {
      continue;
    } else {
      auto v = fib(k);
      comps.insert(comps.end(), v.begin(), v.end());
    }
  }
  const std::vector<Poly>& base = (i == p) ? x[p - 1] : x[p];
  for (std::size_t a = 0; a < m; ++a) comps.push_back(base[a]);
  return PolyMap(gp, tgt, comps);
}

PolyMap nerve_degeneracy(const SplitGroupoid& G, int p, int i) {
  if (p < 0 || i < 0 || i > p) throw DomainError("nerve_degeneracy: index out of range");
  Chart gp = G.nerve_chart(p), tgt = G.nerve_chart(p + 1);
  const std::size_t d = G.fiber_dim(), m = G.dim();
  auto x = G.string_points(p);
  std::vector<Poly> comps;
  for (int k = 1; k <= p + 1; ++k) {
    if (k == i + 1) {
      auto u = unit_at(G, gp, x[i]);
      comps.insert(comps.end(), u.begin(), u.end());
    } else {
      int old = k <= i ? k : k - 1;
      for (std::size_t c = 0; c < d; ++c) comps.push_back(Poly::variable(gp, G.fiber_index(p, old, c)));
    }
  }
  for (std::size_t a = 0; a < m; ++a) comps.push_back(x[p][a]);
  return PolyMap(gp, tgt, comps);
}

PolyMap nerve_target(const SplitGroupoid& G, int p) {
  auto x = G.string_points(p);
  return PolyMap(G.nerve_chart(p), G.object_chart(), x[0]);
}

// ---------------------------------------------------------------- axioms

namespace {

std::string vec_str(const std::vector<Poly>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + ")";
}

void compare(Report& rep, const std::string& name, const std::vector<Poly>& a, const std::vector<Poly>& b) {
  bool ok = a == b;
  rep.add(name, ok, ok ? "" : "residual: lhs " + vec_str(a) + " vs rhs " + vec_str(b));
}

std::vector<Poly> apply_map(const std::vector<Poly>& f, const PolyMap& F) {
  std::vector<Poly> out;
  for (const auto& p : f) out.push_back(substitute(p, F));
  return out;
}

}  // namespace

Report check_groupoid(const SplitGroupoid& G) {
  Report rep;
  const std::size_t d = G.fiber_dim(), m = G.dim();
  Chart M = G.object_chart(), g1 = G.nerve_chart(1), g3 = G.nerve_chart(3);
  std::vector<Poly> xM;
  for (std::size_t a = 0; a < m; ++a) xM.push_back(Poly::variable(M, a));

  // t(1_x) = x
  {
    std::vector<Poly> comps = G.unit();
    comps.insert(comps.end(), xM.begin(), xM.end());
    compare(rep, "target of unit", apply_map(G.target(), PolyMap(M, g1, comps)), xM);
  }
  // On G_2 = (g, h): t(gh) = t(g); unit laws; on G_3 associativity.
  PolyMap d0 = nerve_face(G, 2, 0), d1 = nerve_face(G, 2, 1), d2 = nerve_face(G, 2, 2);
  compare(rep, "target of product", apply_map(G.target(), d1), apply_map(G.target(), d2));
  {
    PolyMap s0 = nerve_degeneracy(G, 1, 0), s1 = nerve_degeneracy(G, 1, 1);
    PolyMap id = PolyMap::identity(g1);
    compare(rep, "left unit", compose(d1, s0).comps(), id.comps());
    compare(rep, "right unit", compose(d1, s1).comps(), id.comps());
  }
  {
    // (gh)k vs g(hk): d_1 d_1 vs d_1 d_2 on G_3
    PolyMap a = compose(nerve_face(G, 2, 1), nerve_face(G, 3, 1));
    PolyMap b = compose(nerve_face(G, 2, 1), nerve_face(G, 3, 2));
    compare(rep, "associativity", a.comps(), b.comps());
  }
  {
    // inverse laws on G_1 = (u0; x1)
    std::vector<Poly> u, x1;
    for (std::size_t c = 0; c < d; ++c) u.push_back(Poly::variable(g1, G.fiber_index(1, 1, c)));
    for (std::size_t a = 0; a < m; ++a) x1.push_back(Poly::variable(g1, G.base_index(1, a)));
    auto tg = G.target();
    std::vector<Poly> inv_arrow = G.inverse();
    inv_arrow.insert(inv_arrow.end(), tg.begin(), tg.end());
    compare(rep, "target of inverse", apply_map(G.target(), PolyMap(g1, g1, inv_arrow)), x1);
    Chart g2 = G.nerve_chart(2);
    // g * g^-1 = 1_{t(g)}: mult(u, inv, t(g))
    std::vector<Poly> c1 = u;
    c1.insert(c1.end(), G.inverse().begin(), G.inverse().end());
    c1.insert(c1.end(), tg.begin(), tg.end());
    compare(rep, "right inverse", apply_map(G.mult(), PolyMap(g1, g2, c1)), unit_at(G, g1, tg));
    // g^-1 * g = 1_{s(g)}
    std::vector<Poly> c2 = G.inverse();
    c2.insert(c2.end(), u.begin(), u.end());
    c2.insert(c2.end(), x1.begin(), x1.end());
    compare(rep, "left inverse", apply_map(G.mult(), PolyMap(g1, g2, c2)), unit_at(G, g1, x1));
  }
  (void)g3;
  return rep;
}

// ---------------------------------------------------------------- Bott-Shulman

BSForm bs_delta(const SplitGroupoid& G, const BSForm& w) {
  BSForm out{w.level + 1, PolyForm()};
  bool first = true;
  for (int i = 0; i <= w.level + 1; ++i) {
    PolyForm t = pullback(nerve_face(G, w.level + 1, i), w.form);
    if (i & 1) t = -t;
    if (first) {
      out.form = t;
      first = false;
    } else {
      out.form += t;
    }
  }
  return out;
}

bool is_normalized(const SplitGroupoid& G, const BSForm& w) {
  for (int i = 0; i < w.level; ++i)
    if (!pullback(nerve_degeneracy(G, w.level - 1, i), w.form).is_zero()) return false;
  return true;
}

BSForm normalize(const SplitGroupoid& G, const BSForm& w) {
  PolyForm f = w.form;
  for (int j = w.level - 1; j >= 0; --j) {
    PolyForm back = pullback(nerve_degeneracy(G, w.level - 1, j), f);
    f -= pullback(nerve_face(G, w.level, j), back).embed(f.chart());
  }
  return {w.level, f};
}

BSForm module_action(const SplitGroupoid& G, const PolyForm& phi, const BSForm& w) {
  PolyForm tphi = pullback(nerve_target(G, w.level), phi);
  Chart c = with_params(tphi.chart(), param_names(w.form.chart()));
  Chart c2 = with_params(w.form.chart(), param_names(c));
  return {w.level, wedge(tphi.embed(c2), w.form.embed(c2))};
}

// ---------------------------------------------------------------- infinitesimal action

PolyVectorField right_invariant_vf(const SplitGroupoid& G, const Section& a, int p) {
  const std::size_t d = G.fiber_dim(), m = G.dim();
  if (a.size() != d) throw DomainError("right_invariant_vf: section rank must equal the fiber dimension");
  const Chart& ac = a[0].chart();
  std::vector<std::string> params = param_names(ac);
  Chart gp = with_params(G.nerve_chart(p), params);
  std::vector<Poly> comps(gp.size(), Poly(gp));
  if (p == 0) {
    // anchor: d t / d u at the unit
    Chart M = G.object_chart(), g1 = G.nerve_chart(1);
    std::vector<Poly> at_unit = G.unit();
    for (std::size_t b = 0; b < m; ++b) at_unit.push_back(Poly::variable(M, b));
    PolyMap U(M, g1, at_unit);
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t k = 0; k < d; ++k) {
        Poly rho = substitute(G.target()[b].partial(G.fiber_index(1, 1, k)), U).embed(gp);
        comps[b] += a[k].embed(gp) * rho;
      }
    return PolyVectorField(gp, comps);
  }
  auto x = G.string_points(p);
  Chart plain = G.nerve_chart(p);
  PolyMap to_x0(plain, G.object_chart(), x[0]);
  std::vector<Poly> ak;
  for (std::size_t k = 0; k < d; ++k) ak.push_back(substitute(a[k], to_x0).embed(gp));
  // d mult / d u_g at (u0(x_0), u_1, x_1)
  std::vector<Poly> sub = unit_at(G, plain, x[0]);
  for (std::size_t c = 0; c < d; ++c) sub.push_back(Poly::variable(plain, G.fiber_index(p, 1, c)));
  for (const auto& v : x[1]) sub.push_back(v);
  PolyMap F(plain, G.nerve_chart(2), sub);
  Chart g2 = G.nerve_chart(2);
  for (std::size_t c = 0; c < d; ++c) {
    Poly acc(gp);
    for (std::size_t k = 0; k < d; ++k) {
      Poly jac = substitute(G.mult()[c].partial(G.fiber_index(2, 1, k)), F).embed(gp);
      if (!jac.is_zero()) acc += ak[k] * jac;
    }
    comps[G.fiber_index(p, 1, c)] = acc;
  }
  return PolyVectorField(gp, comps);
}

AlgebroidPtr lie_algebroid_of(const SplitGroupoid& G) {
  const std::size_t d = G.fiber_dim(), m = G.dim();
  Chart M = G.object_chart(), g1 = G.nerve_chart(1);
  std::vector<std::vector<Poly>> anchor;
  for (std::size_t k = 0; k < d; ++k) {
    PolyVectorField r = right_invariant_vf(G, frame_section(M, d, k), 0);
    anchor.push_back(r.comps());
  }
  std::vector<PolyVectorField> fields;
  for (std::size_t k = 0; k < d; ++k) fields.push_back(right_invariant_vf(G, frame_section(M, d, k), 1));
  std::vector<Poly> at_unit = G.unit();
  for (std::size_t b = 0; b < m; ++b) at_unit.push_back(Poly::variable(M, b));
  PolyMap U(M, g1, at_unit);
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Poly>> c;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      PolyVectorField br = bracket(fields[j], fields[k]);
      std::vector<Poly> col;
      for (std::size_t i = 0; i < d; ++i) col.push_back(substitute(br.comp(G.fiber_index(1, 1, i)), U));
      c[{j, k}] = col;
    }
  return std::make_shared<Algebroid>(M, d, anchor, c);
}

namespace {

// Moves a form and a field onto a common chart (nerve chart plus the union
// of their parameters).
std::pair<PolyForm, PolyVectorField> align(const SplitGroupoid& G, const Section& a, const BSForm& w) {
  if (a.empty()) throw DomainError("empty section");
  std::vector<std::string> params = merge_params(param_names(a[0].chart()), param_names(w.form.chart()));
  Chart c = with_params(G.nerve_chart(w.level), params);
  Section a2;
  Chart ac = with_params(G.object_chart(), params);
  for (const auto& x : a) a2.push_back(x.embed(ac));
  return {w.form.embed(c), right_invariant_vf(G, a2, w.level).embed(c)};
}

}  // namespace

BSForm L_op(const SplitGroupoid& G, const Section& a, const BSForm& w) {
  auto [f, X] = align(G, a, w);
  return {w.level, lie(X, f)};
}

BSForm R_op(const SplitGroupoid& G, const Section& a, const BSForm& w) {
  if (w.level < 1) throw DomainError("R_op: level must be >= 1");
  auto [f, X] = align(G, a, w);
  return {w.level - 1, pullback(nerve_degeneracy(G, w.level - 1, 0), lie(X, f))};
}

BSForm J_op(const SplitGroupoid& G, const Section& a, const BSForm& w) {
  if (w.level < 1) throw DomainError("J_op: level must be >= 1");
  auto [f, X] = align(G, a, w);
  return {w.level - 1, pullback(nerve_degeneracy(G, w.level - 1, 0), interior(X, f))};
}

// ---------------------------------------------------------------- Van Est

PolyForm vanest_component(const SplitGroupoid& G, const EvalContext& ctx, const BSForm& w,
                          const std::vector<Section>& antisym, int level) {
  const int p = w.level;
  if (level < 0 || level > p) throw DomainError("vanest_component: level out of range");
  if (static_cast<int>(antisym.size()) != p - level) throw DomainError("vanest_component: wrong arity");
  const Chart& E = ctx.chart();
  PolyForm total(E);
  // sigma[k] = label placed at position k (1-based labels); J labels are
  // p-i+1..p in increasing position order.
  std::vector<int> sigma(p + 1, 0);
  std::vector<bool> used(antisym.size(), false);
  const int r = p - level;
  std::function<void(int, int, const BSForm&)> rec = [&](int pos, int j_left, const BSForm& cur) {
    if (cur.form.is_zero()) return;
    if (pos == 0) {
      // Assign J labels in increasing position order.
      std::vector<int> perm(sigma.begin() + 1, sigma.end());
      int next = r + 1;
      for (auto& v : perm)
        if (v == 0) v = next++;
      int inv = 0;
      for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b)
          if (perm[a] > perm[b]) ++inv;
      int s = sign_pow(inv) * sign_pow(level) * sign_pow(p * (p + 1) / 2);
      PolyForm f = cur.form.embed(E);
      total += s < 0 ? -f : f;
      return;
    }
    if (j_left > 0) {
      sigma[pos] = 0;
      rec(pos - 1, j_left - 1, J_op(G, ctx.alpha(), cur));
    }
    for (std::size_t sidx = 0; sidx < antisym.size(); ++sidx) {
      if (used[sidx]) continue;
      used[sidx] = true;
      sigma[pos] = static_cast<int>(sidx) + 1;
      rec(pos - 1, j_left, R_op(G, antisym[sidx], cur));
      used[sidx] = false;
    }
    sigma[pos] = 0;
  };
  rec(p, level, w);
  return total;
}

WeilElement vanest(const SplitGroupoid& G, const EvalContext& ctx, const BSForm& w) {
  if (!w.form.is_homogeneous()) throw DomainError("vanest: form must be homogeneous");
  if (!is_normalized(G, w)) throw DomainError("vanest: form is not normalized");
  const int p = w.level;
  const int q = std::max(0, w.form.max_degree());
  return reconstruct_from_frame(ctx, p, q, [&](Mask T, int k) {
    std::vector<Section> args;
    for (Mask m = T; m; m &= m - 1) args.push_back(ctx.frame(__builtin_ctzll(m)));
    return vanest_component(G, ctx, w, args, k);
  });
}

// ---------------------------------------------------------------- multiplicative forms

Report multiplicative_check(const SplitGroupoid& G, const PolyForm& w, const std::optional<PolyForm>& phi) {
  Report rep;
  if (phi && !ext_d(*phi).is_zero()) throw DomainError("multiplicative_check: phi is not closed");
  PolyForm lhs = pullback(nerve_face(G, 2, 1), w);
  PolyForm rhs = pullback(nerve_face(G, 2, 0), w) + pullback(nerve_face(G, 2, 2), w);
  PolyForm res = lhs - rhs;
  rep.add("multiplicative", res.is_zero(), res.is_zero() ? "" : "residual: " + res.to_string());
  if (phi) {
    PolyForm r2 = ext_d(w) - (pullback(nerve_face(G, 1, 0), *phi) - pullback(nerve_face(G, 1, 1), *phi));
    rep.add("relatively closed", r2.is_zero(), r2.is_zero() ? "" : "residual: " + r2.to_string());
  }
  return rep;
}

// ---------------------------------------------------------------- library

SplitGroupoid pair_groupoid(const std::vector<std::string>& base) {
  std::vector<std::string> t, u, mult, inv;
  for (const auto& b : base) {
    t.push_back(b + "0");
    u.push_back(b);
    mult.push_back(b + "0");
    inv.push_back(b + "1");
  }
  return SplitGroupoid::parse(base, base, t, u, mult, inv);
}

SplitGroupoid translation_groupoid() {
  return SplitGroupoid::parse({"x"}, {"u"}, {"x1 + u0"}, {"0"}, {"u0 + u1"}, {"-u0"});
}

SplitGroupoid shear_groupoid() {
  return SplitGroupoid::parse({"x", "y"}, {"u"}, {"x1", "y1 + u0*x1"}, {"0"}, {"u0 + u1"}, {"-u0"});
}

SplitGroupoid heisenberg_group() {
  return SplitGroupoid::parse({}, {"a", "b", "c"}, {}, {"0", "0", "0"}, {"a0 + a1", "b0 + b1", "c0 + c1 + a0*b1"},
                              {"-a0", "-b0", "-c0 + a0*b0"});
}

}  // namespace weil
