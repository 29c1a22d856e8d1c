#include "weil/intrinsic.hpp"

#include <map>

namespace weil {

namespace {

std::vector<std::string> lambda_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back("λ" + std::to_string(j + 1));
  return out;
}

Chart eval_chart(const Algebroid& P, const std::vector<std::string>& extra) {
  Chart E = chart_extend(P.base(), lambda_names(P.rank()));
  if (!extra.empty()) E = chart_extend(E, extra);
  return E;
}

std::pair<int, int> bidegree_of(const WeilElement& w) {
  auto b = w.bidegrees();
  if (b.size() != 1) throw DomainError("component evaluation needs a nonzero homogeneous element");
  return b[0];
}

int sign_pow(int k) { return (k & 1) ? -1 : 1; }

PolyForm signed_form(int s, const PolyForm& f) { return s < 0 ? -f : f; }

}  // namespace

EvalContext::EvalContext(AlgebroidPtr P, const std::vector<std::string>& extra_params)
    : P_(std::move(P)), E_(eval_chart(*P_, extra_params)), PE_(P_->on(E_)) {
  for (std::size_t j = 0; j < P_->rank(); ++j) alpha_.push_back(Poly::variable(E_, lambda_index(j)));
}

PolyForm EvalContext::sym_derivative(const Section& gamma, const PolyForm& P) const {
  PolyForm r(E_);
  for (const auto& [m, c] : P.comps()) {
    Poly acc(E_);
    for (std::size_t j = 0; j < P_->rank(); ++j)
      if (!gamma[j].is_zero()) acc += gamma[j] * c.partial(lambda_index(j));
    r.add_term(m, acc);
  }
  return r;
}

// ---------------------------------------------------------------- evaluation

PolyForm eval_component(const EvalContext& ctx, const WeilElement& w, const std::vector<Section>& antisym,
                        const Section& sym, int level) {
  const Chart& E = ctx.chart();
  PolyForm zero(E);
  if (w.is_zero()) return zero;
  auto [p, q] = bidegree_of(w);
  if (level < 0 || level > std::min(p, q)) throw DomainError("eval_component: level out of range");
  if (static_cast<int>(antisym.size()) != p - level)
    throw DomainError("eval_component: expected " + std::to_string(p - level) + " antisymmetric arguments");
  const Algebroid& P = w.alg();
  const std::size_t n = P.rank(), m = P.dim();
  if (sym.size() != n) throw DomainError("eval_component: symmetric argument has wrong rank");

  const std::size_t r = antisym.size();
  // Per-slot values: theta^i -> beta_s^i, mu^i at level 0 -> -d(beta_s^i).
  std::vector<std::vector<PolyForm>> th(r), mu0(r);
  for (std::size_t s = 0; s < r; ++s) {
    if (antisym[s].size() != n) throw DomainError("eval_component: section has wrong rank");
    for (std::size_t i = 0; i < n; ++i) {
      Poly b = antisym[s][i].embed(E);
      th[s].push_back(PolyForm::function(b));
      mu0[s].push_back(-ext_d(PolyForm::function(b)));
    }
  }
  std::vector<PolyForm> dx, mu1;
  for (std::size_t a = 0; a < m; ++a) dx.push_back(PolyForm::differential(E, a));
  for (std::size_t i = 0; i < n; ++i) mu1.push_back(PolyForm::function(sym[i].embed(E)));

  const Mask full = r ? ((Mask(1) << r) - 1) : 0;
  PolyForm out(E);
  for (const auto& [k, f] : w.terms()) {
    std::map<Mask, PolyForm> state;
    state.emplace(0, PolyForm::function(f.embed(E)));
    auto step = [&](const std::vector<std::pair<Mask, const PolyForm*>>& options) {
      std::map<Mask, PolyForm> next;
      for (const auto& [mA, vA] : state) {
        int qa = vA.max_degree();
        for (const auto& [mB, vB] : options) {
          int s = shuffle_sign(mA, mB);
          if (!s || vB->is_zero()) continue;
          if ((qa * popcount(mB)) & 1) s = -s;
          PolyForm prod = wedge(vA, *vB);
          if (prod.is_zero()) continue;
          auto it = next.find(mA | mB);
          if (it == next.end())
            next.emplace(mA | mB, signed_form(s, prod));
          else
            it->second += signed_form(s, prod);
        }
      }
      state.clear();
      for (auto& [mk, v] : next)
        if (!v.is_zero()) state.emplace(mk, std::move(v));
    };
    for (Mask D = k.D; D && !state.empty(); D &= D - 1) step({{0, &dx[__builtin_ctzll(D)]}});
    for (Mask T = k.T; T && !state.empty(); T &= T - 1) {
      std::size_t i = __builtin_ctzll(T);
      std::vector<std::pair<Mask, const PolyForm*>> opts;
      for (std::size_t s = 0; s < r; ++s) opts.emplace_back(Mask(1) << s, &th[s][i]);
      step(opts);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned t = 0; t < k.e[i] && !state.empty(); ++t) {
        std::vector<std::pair<Mask, const PolyForm*>> opts;
        opts.emplace_back(0, &mu1[i]);
        for (std::size_t s = 0; s < r; ++s) opts.emplace_back(Mask(1) << s, &mu0[s][i]);
        step(opts);
      }
    auto it = state.find(full);
    if (it != state.end()) out += it->second;
  }
  return out;
}

PolyForm eval_component(const EvalContext& ctx, const WeilElement& w, const std::vector<Section>& antisym,
                        int level) {
  return eval_component(ctx, w, antisym, ctx.alpha(), level);
}

// ---------------------------------------------------------------- intrinsic differentials

PolyForm intrinsic_dv_component(const EvalContext& ctx, const WeilElement& w, const std::vector<Section>& antisym,
                                int k) {
  if (w.is_zero()) return PolyForm(ctx.chart());
  auto [p, q] = bidegree_of(w);
  if (k < 0 || k > std::min(p, q + 1)) throw DomainError("intrinsic_dv_component: level out of range");
  if (static_cast<int>(antisym.size()) != p - k) throw DomainError("intrinsic_dv_component: wrong arity");
  PolyForm acc(ctx.chart());
  if (k <= q) acc += ext_d(eval_component(ctx, w, antisym, k));
  if (k >= 1) {
    std::vector<Section> with_alpha = antisym;
    with_alpha.push_back(ctx.alpha());
    acc += eval_component(ctx, w, with_alpha, k - 1);
  }
  return signed_form(sign_pow(p - k), acc);
}

PolyForm intrinsic_dh_component(const EvalContext& ctx, const WeilElement& w, const std::vector<Section>& antisym,
                                int k) {
  if (w.is_zero()) return PolyForm(ctx.chart());
  auto [p, q] = bidegree_of(w);
  if (k < 0 || k > std::min(p + 1, q)) throw DomainError("intrinsic_dh_component: level out of range");
  const std::size_t r1 = antisym.size();
  if (static_cast<int>(r1) != p + 1 - k) throw DomainError("intrinsic_dh_component: wrong arity");
  const Algebroid& PE = ctx.ext();
  const Section& alpha = ctx.alpha();
  PolyForm acc(ctx.chart());
  if (k <= std::min(p, q)) {
    // Koszul formula for delta(c_k).
    for (std::size_t i = 0; i < r1; ++i)
      for (std::size_t j = i + 1; j < r1; ++j) {
        std::vector<Section> args{bracket_sections(PE, antisym[i], antisym[j])};
        for (std::size_t l = 0; l < r1; ++l)
          if (l != i && l != j) args.push_back(antisym[l]);
        acc += signed_form(sign_pow(static_cast<int>(i + j)), eval_component(ctx, w, args, k));
      }
    for (std::size_t i = 0; i < r1; ++i) {
      std::vector<Section> args;
      for (std::size_t l = 0; l < r1; ++l)
        if (l != i) args.push_back(antisym[l]);
      PolyForm val = eval_component(ctx, w, args, k);
      PolyForm L = lie(PE.anchor_of(antisym[i]), val) -
                   ctx.sym_derivative(bracket_sections(PE, antisym[i], alpha), val);
      acc += signed_form(sign_pow(static_cast<int>(i)), L);
    }
  }
  if (k >= 1) acc += signed_form(sign_pow(p - k), interior(PE.anchor_of(alpha), eval_component(ctx, w, antisym, k - 1)));
  return acc;
}

// ---------------------------------------------------------------- reconstruction

WeilElement reconstruct_from_frame(const EvalContext& ctx, int p, int q,
                                   const std::function<PolyForm(Mask, int)>& values) {
  const AlgebroidPtr& P = ctx.presentation();
  const std::size_t n = P->rank(), m = P->dim();
  const Chart& E = ctx.chart();
  WeilElement out(P);
  for (int k = 0; k <= std::min(p, q); ++k) {
    int t = p - k;
    if (t > static_cast<int>(n) || q - k > static_cast<int>(m)) continue;
    for (Mask T = 0; T < (Mask(1) << n); ++T) {
      if (popcount(T) != t) continue;
      PolyForm val = values(T, k);
      for (const auto& [D, c] : val.comps()) {
        if (popcount(D) != q - k)
          throw DomainError("reconstruct: component of the wrong form degree at level " + std::to_string(k));
        int s = sign_pow(popcount(D) * t);
        for (const auto& [ex, coef] : c.terms()) {
          Exponents xe(ex.begin(), ex.begin() + m), le(ex.begin() + m, ex.begin() + m + n);
          for (std::size_t extra = m + n; extra < E.size(); ++extra)
            if (ex[extra]) throw DomainError("reconstruct: unexpected parameter in component");
          if (static_cast<int>(total_degree(le)) != k)
            throw DomainError("reconstruct: symmetric degree does not match level");
          out.add_term({D, T, le}, Poly::monomial(P->base(), xe, s < 0 ? Rat(-coef) : coef));
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- checks

Report leibniz_check(const EvalContext& ctx, const WeilElement& w, const std::vector<Section>& sections,
                     const Poly& f0) {
  Report rep;
  if (w.is_zero()) return rep;
  auto [p, q] = bidegree_of(w);
  Poly f = f0.embed(ctx.chart());
  PolyForm df = ext_d(PolyForm::function(f));
  for (int i = 0; i <= std::min(p, q); ++i) {
    int r = p - i;
    if (r < 1) continue;
    if (static_cast<int>(sections.size()) < r) throw DomainError("leibniz_check: not enough sections");
    std::vector<Section> args(sections.begin(), sections.begin() + r);
    std::vector<Section> scaled = args;
    scaled.back() = section_scale(f, args.back());
    PolyForm lhs = eval_component(ctx, w, scaled, i);
    PolyForm rhs = f * eval_component(ctx, w, args, i);
    if (i + 1 <= std::min(p, q)) {
      std::vector<Section> shorter(args.begin(), args.end() - 1);
      rhs -= wedge(df, ctx.sym_derivative(args.back(), eval_component(ctx, w, shorter, i + 1)));
    }
    bool ok = lhs == rhs;
    rep.add("level " + std::to_string(i), ok,
            ok ? "" : "lhs " + lhs.to_string() + " vs rhs " + rhs.to_string());
  }
  return rep;
}

bool body_determinacy(const EvalContext& ctx, const WeilElement& w, const WeilElement& w2) {
  if (w.is_zero() && w2.is_zero()) return true;
  auto b = w.is_zero() ? bidegree_of(w2) : bidegree_of(w);
  if (!w2.is_zero() && bidegree_of(w2) != b) throw DomainError("body_determinacy: bidegree mismatch");
  if (!w.is_zero() && bidegree_of(w) != b) throw DomainError("body_determinacy: bidegree mismatch");
  auto [p, q] = b;
  const Algebroid& P = w.is_zero() ? w2.alg() : w.alg();
  if (q > static_cast<int>(P.dim())) throw DomainError("body_determinacy: needs q <= dim M");
  const std::size_t n = P.rank(), m = P.dim();
  std::vector<Section> pool;
  for (std::size_t j = 0; j < n; ++j) pool.push_back(ctx.frame(j));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t j = 0; j < n; ++j) pool.push_back(section_scale(Poly::variable(ctx.chart(), a), ctx.frame(j)));
  std::vector<std::size_t> idx(static_cast<std::size_t>(p));
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) -> bool {
    if (pos == idx.size()) {
      std::vector<Section> args;
      for (auto i : idx) args.push_back(pool[i]);
      return eval_component(ctx, w, args, 0) == eval_component(ctx, w2, args, 0);
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
      idx[pos] = i;
      if (!rec(pos + 1, i + 1)) return false;
    }
    return true;
  };
  return rec(0, 0);
}

// ---------------------------------------------------------------- connection model

Connection::Connection(const Algebroid& P) : n_(P.rank()), m_(P.dim()), g_(n_ * m_ * n_, Poly(P.base())) {}

void Connection::set(std::size_t i, std::size_t a, std::size_t j, const Poly& v) {
  g_.at((i * m_ + a) * n_ + j) = v;
}

namespace {

WeilElement map_sym_generators(const Connection& conn, const WeilElement& src, int sign) {
  const AlgebroidPtr& P = src.presentation();
  const std::size_t n = P->rank(), m = P->dim();
  std::vector<WeilElement> image;
  for (std::size_t i = 0; i < n; ++i) {
    WeilElement x = WeilElement::mu(P, i);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t j = 0; j < n; ++j) {
        const Poly& g = conn.gamma(i, a, j);
        if (g.is_zero()) continue;
        WeilElement corr = g * (WeilElement::dgen(P, a) * WeilElement::theta(P, j));
        x += sign > 0 ? corr : -corr;
      }
    image.push_back(x);
  }
  WeilElement out(P);
  for (const auto& [k, f] : src.terms()) {
    WeilElement t = WeilElement::term(P, {k.D, k.T, Exponents(n, 0)}, f);
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned e = 0; e < k.e[i]; ++e) t = t * image[i];
    out += t;
  }
  return out;
}

}  // namespace

WeilElement i_nabla(const Connection& conn, const WeilElement& source) { return map_sym_generators(conn, source, 1); }

WeilElement i_nabla_inverse(const Connection& conn, const WeilElement& flat) {
  return map_sym_generators(conn, flat, -1);
}

WeilElement nabla_dv(const Connection& conn, const WeilElement& s) {
  return i_nabla_inverse(conn, weil_dv(i_nabla(conn, s)));
}

WeilElement nabla_dh(const Connection& conn, const WeilElement& s) {
  return i_nabla_inverse(conn, weil_dh(i_nabla(conn, s)));
}

}  // namespace weil
