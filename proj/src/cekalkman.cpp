#include "weil/cekalkman.hpp"

#include <algorithm>

namespace weil {

namespace {

int sign_pow(int k) { return (k & 1) ? -1 : 1; }

std::vector<std::string> lambda_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back("λ" + std::to_string(j + 1));
  return out;
}

Rat structure(const LieAlgebraAction& act, std::size_t i, std::size_t j, std::size_t k) {
  return act.g->c(i, j, k).constant_term();
}

std::size_t lambda_index(const LieAlgebraAction& act, std::size_t j) { return act.chart.size() + j; }

// d/dlambda_j applied coefficientwise.
PolyForm lambda_partial(const PolyForm& v, std::size_t var) {
  PolyForm out(v.chart());
  for (const auto& [m, c] : v.comps()) out.add_term(m, c.partial(var));
  return out;
}

// Lambda-degrees present in v.
std::vector<int> lambda_degrees(const LieAlgebraAction& act, const PolyForm& v) {
  std::vector<int> out;
  const std::size_t first = act.chart.size(), n = act.rank();
  for (const auto& [m, c] : v.comps())
    for (const auto& [e, r] : c.terms()) {
      int k = 0;
      for (std::size_t j = 0; j < n; ++j) k += e[first + j];
      if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    }
  return out;
}

std::vector<std::size_t> indices(Mask m) {
  std::vector<std::size_t> out;
  for (; m; m &= m - 1) out.push_back(__builtin_ctzll(m));
  return out;
}

// c(e_{idx[0]}, ..., e_{idx[r-1]}) for an arbitrary index list.
PolyForm value_at(const KalkmanElement& c, std::vector<std::size_t> idx) {
  int sign = 1;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      if (idx[a] == idx[b]) return PolyForm(c.eval_chart());
      if (idx[a] > idx[b]) sign = -sign;
    }
  Mask m = 0;
  for (auto i : idx) m |= Mask{1} << i;
  PolyForm v = c.at(m);
  return sign < 0 ? -v : v;
}

}  // namespace

// ---------------------------------------------------------------- actions

Report LieAlgebraAction::certify() const {
  Report rep;
  if (g->dim() != 0) throw DomainError("action: the Lie algebra must be presented over a point");
  if (fields.size() != g->rank()) throw DomainError("action: one vector field per frame element is required");
  rep.merge(check_axioms(*g));
  for (std::size_t j = 0; j < rank(); ++j)
    for (std::size_t k = j + 1; k < rank(); ++k) {
      PolyVectorField lhs = bracket(fields[j], fields[k]);
      std::vector<Poly> res = lhs.comps();
      for (std::size_t i = 0; i < rank(); ++i) {
        Rat c = structure(*this, i, j, k);
        if (c == 0) continue;
        for (std::size_t a = 0; a < chart.size(); ++a) res[a] -= c * fields[i].comp(a);
      }
      bool ok = std::all_of(res.begin(), res.end(), [](const Poly& p) { return p.is_zero(); });
      std::string detail;
      if (!ok) {
        detail = "residual:";
        for (std::size_t a = 0; a < res.size(); ++a)
          if (!res[a].is_zero()) detail += " d" + chart.name(a) + ": " + res[a].to_string();
      }
      rep.add("action bracket e" + std::to_string(j + 1) + ",e" + std::to_string(k + 1), ok, detail);
    }
  return rep;
}

ActionPtr make_action(AlgebroidPtr g, Chart chart, std::vector<PolyVectorField> fields) {
  for (auto& f : fields) f = f.embed(chart);
  return std::make_shared<LieAlgebraAction>(LieAlgebraAction{std::move(g), std::move(chart), std::move(fields)});
}

ActionPtr so3_rotations() {
  auto A = so3_on_r3();
  std::vector<PolyVectorField> fields;
  for (std::size_t i = 0; i < 3; ++i) fields.push_back(A->anchor_field(i));
  return make_action(so3(), A->base(), fields);
}

ActionPtr trivial_action(std::size_t n, const Chart& chart) {
  std::vector<PolyVectorField> fields(n, PolyVectorField(chart));
  return make_action(abelian(n), chart, fields);
}

Chart kalkman_chart(const LieAlgebraAction& act) { return chart_extend(act.chart, lambda_names(act.rank())); }

PolyVectorField formal_field(const LieAlgebraAction& act) {
  Chart E = kalkman_chart(act);
  PolyVectorField out(E);
  for (std::size_t j = 0; j < act.rank(); ++j)
    out = out + act.fields[j].embed(E) * Poly::variable(E, lambda_index(act, j));
  return out;
}

// ---------------------------------------------------------------- elements

KalkmanElement::KalkmanElement(ActionPtr act) : act_(std::move(act)), E_(kalkman_chart(*act_)) {}

KalkmanElement KalkmanElement::value(ActionPtr act, Mask T, const PolyForm& v) {
  KalkmanElement r(std::move(act));
  r.add(T, v);
  return r;
}

KalkmanElement KalkmanElement::theta(ActionPtr act, std::size_t i) {
  Chart E = kalkman_chart(*act);
  return value(act, Mask{1} << i, PolyForm::function(Poly(E, 1)));
}

KalkmanElement KalkmanElement::mu(ActionPtr act, std::size_t i) {
  Chart E = kalkman_chart(*act);
  return value(act, 0, PolyForm::function(Poly::variable(E, lambda_index(*act, i))));
}

KalkmanElement KalkmanElement::form(ActionPtr act, const PolyForm& w) {
  Chart E = kalkman_chart(*act);
  return value(act, 0, w.embed(E));
}

PolyForm KalkmanElement::at(Mask T) const {
  auto it = comps_.find(T);
  return it == comps_.end() ? PolyForm(E_) : it->second;
}

void KalkmanElement::add(Mask T, const PolyForm& v) {
  if (v.is_zero()) return;
  PolyForm w = v.chart() == E_ ? v : v.embed(E_);
  auto it = comps_.find(T);
  if (it == comps_.end()) {
    comps_.emplace(T, w);
    return;
  }
  it->second += w;
  if (it->second.is_zero()) comps_.erase(it);
}

KalkmanElement KalkmanElement::operator-() const {
  KalkmanElement r(act_);
  for (const auto& [T, v] : comps_) r.comps_.emplace(T, -v);
  return r;
}

KalkmanElement& KalkmanElement::operator+=(const KalkmanElement& o) {
  for (const auto& [T, v] : o.comps_) add(T, v);
  return *this;
}

KalkmanElement& KalkmanElement::operator-=(const KalkmanElement& o) {
  for (const auto& [T, v] : o.comps_) add(T, -v);
  return *this;
}

KalkmanElement operator*(const Rat& c, const KalkmanElement& a) {
  KalkmanElement r(a.act_);
  if (c == 0) return r;
  for (const auto& [T, v] : a.comps_) r.comps_.emplace(T, c * v);
  return r;
}

KalkmanElement operator*(const KalkmanElement& a, const KalkmanElement& b) {
  KalkmanElement r(a.act_);
  for (const auto& [A, va] : a.comps_)
    for (const auto& [B, vb] : b.comps_) {
      if (A & B) continue;
      int s = shuffle_sign(A, B);
      for (int q = 0; q <= va.max_degree(); ++q) {
        PolyForm part = va.part(q);
        if (part.is_zero()) continue;
        PolyForm prod = wedge(part, vb);
        r.add(A | B, s * sign_pow(q * popcount(B)) < 0 ? -prod : prod);
      }
    }
  return r;
}

std::string KalkmanElement::to_string() const {
  if (comps_.empty()) return "0";
  std::string s;
  for (const auto& [T, v] : comps_) {
    if (!s.empty()) s += "; ";
    s += "(";
    bool first = true;
    for (auto i : indices(T)) {
      s += (first ? "e" : ",e") + std::to_string(i + 1);
      first = false;
    }
    s += "): " + v.to_string();
  }
  return s;
}

// ---------------------------------------------------------------- representations

PolyForm rep_lie(const LieAlgebraAction& act, Rep rep, std::size_t a, const PolyForm& v) {
  if (rep == Rep::trivial) return PolyForm(v.chart());
  PolyForm out = lie(act.fields[a].embed(v.chart()), v);
  if (rep == Rep::forms) return out;
  // - d_{[e_a, alpha]} v with [e_a, alpha]^i = c^i_{aj} lambda_j
  const Chart& E = v.chart();
  for (std::size_t i = 0; i < act.rank(); ++i) {
    Poly dir(E);
    for (std::size_t j = 0; j < act.rank(); ++j) {
      Rat c = structure(act, i, a, j);
      if (c != 0) dir += c * Poly::variable(E, lambda_index(act, j));
    }
    if (dir.is_zero()) continue;
    out -= dir * lambda_partial(v, lambda_index(act, i));
  }
  return out;
}

KalkmanElement ce_delta(const KalkmanElement& c, Rep rep) {
  const LieAlgebraAction& act = *c.action();
  const std::size_t n = act.rank();
  KalkmanElement out(c.action());
  std::vector<int> arities;
  for (const auto& [T, v] : c.comps())
    if (std::find(arities.begin(), arities.end(), popcount(T)) == arities.end()) arities.push_back(popcount(T));
  for (Mask U = 1; U < (Mask{1} << n); ++U) {
    const int r1 = popcount(U);
    if (std::find(arities.begin(), arities.end(), r1 - 1) == arities.end()) continue;
    std::vector<std::size_t> u = indices(U);
    PolyForm acc(c.eval_chart());
    // 1-based positions i < j
    for (int i = 0; i < r1; ++i)
      for (int j = i + 1; j < r1; ++j) {
        std::vector<std::size_t> rest;
        for (int k = 0; k < r1; ++k)
          if (k != i && k != j) rest.push_back(u[k]);
        int s = sign_pow(i + j + 2);
        for (std::size_t m = 0; m < n; ++m) {
          Rat cm = structure(act, m, u[i], u[j]);
          if (cm == 0) continue;
          std::vector<std::size_t> idx{m};
          idx.insert(idx.end(), rest.begin(), rest.end());
          PolyForm v = value_at(c, idx);
          if (!v.is_zero()) acc += Rat(Rat(s) * cm) * v;
        }
      }
    if (rep != Rep::trivial)
      for (int i = 0; i < r1; ++i) {
        PolyForm v = c.at(U & ~(Mask{1} << u[i]));
        if (v.is_zero()) continue;
        PolyForm l = rep_lie(act, rep, u[i], v);
        acc += (i % 2 == 0) ? l : -l;
      }
    out.add(U, acc);
  }
  return out;
}

PolyForm sym_partial(const LieAlgebraAction& act, const PolyForm& v, const std::vector<Rat>& a) {
  if (a.size() != act.rank()) throw DomainError("sym_partial: direction has wrong rank");
  auto degs = lambda_degrees(act, v);
  if (degs.size() > 1) throw DomainError("sym_partial: value is not homogeneous in the symmetric slot");
  if (degs.empty() || degs[0] == 0) throw DomainError("sym_partial: degree-0 symmetric slot");
  PolyForm out(v.chart());
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] != 0) out += a[j] * lambda_partial(v, lambda_index(act, j));
  return out;
}

PolyForm polarize(const LieAlgebraAction& act, const PolyForm& v, const std::vector<std::vector<Rat>>& args) {
  if (v.is_zero()) return v;
  auto degs = lambda_degrees(act, v);
  if (degs.size() != 1 || degs[0] != static_cast<int>(args.size()))
    throw DomainError("polarize: argument count must equal the symmetric degree");
  PolyForm out = v;
  Rat fact = 1;
  for (std::size_t k = 0; k < args.size(); ++k) {
    fact *= static_cast<long>(k + 1);
    if (out.is_zero()) return out;
    out = sym_partial(act, out, args[k]);
  }
  return Rat(Rat(1) / fact) * out;
}

// ---------------------------------------------------------------- differentials

KalkmanElement kalkman_i_A(const KalkmanElement& c) {
  PolyVectorField X = formal_field(*c.action());
  KalkmanElement out(c.action());
  for (const auto& [T, v] : c.comps()) {
    PolyForm iv = interior(X, v);
    out.add(T, sign_pow(popcount(T) + 1) < 0 ? -iv : iv);
  }
  return out;
}

KalkmanElement kalkman_d_A(const KalkmanElement& c) {
  KalkmanElement out(c.action());
  for (const auto& [T, v] : c.comps()) {
    PolyForm dv = ext_d(v);
    out.add(T, sign_pow(popcount(T)) < 0 ? -dv : dv);
  }
  return out;
}

KalkmanElement kalkman_i_g(const KalkmanElement& c) {
  const LieAlgebraAction& act = *c.action();
  KalkmanElement out(c.action());
  const Chart& E = c.eval_chart();
  for (const auto& [T, v] : c.comps()) {
    const int r = popcount(T);
    if (r == 0) continue;
    // c(.., e_j | alpha) with e_j moved from its sorted slot to the last one
    for (auto j : indices(T)) {
      Mask rest = T & ~(Mask{1} << j);
      int after = popcount(rest >> j);
      int s = sign_pow(r + 1) * sign_pow(after);
      Poly lam = Poly::variable(E, lambda_index(act, j));
      out.add(rest, Rat(s) * (lam * v));
    }
  }
  return out;
}

KalkmanElement kalkman_dh(const KalkmanElement& c) { return ce_delta(c, Rep::sym) + kalkman_i_A(c); }

KalkmanElement kalkman_dv(const KalkmanElement& c) { return kalkman_d_A(c) + kalkman_i_g(c); }

KalkmanElement from_weil(const ActionPtr& act, const WeilElement& w, const PolyForm& a) {
  if (w.alg().dim() != 0 || w.alg().rank() != act->rank())
    throw DomainError("from_weil: element must live in W(g) over a point");
  KalkmanElement out(act);
  KalkmanElement fa = KalkmanElement::form(act, a);
  for (const auto& [k, coeff] : w.terms()) {
    KalkmanElement mono = KalkmanElement::form(act, PolyForm::function(Poly(act->chart, coeff.constant_term())));
    for (auto i : indices(k.T)) mono = mono * KalkmanElement::theta(act, i);
    for (std::size_t i = 0; i < k.e.size(); ++i)
      for (unsigned t = 0; t < k.e[i]; ++t) mono = mono * KalkmanElement::mu(act, i);
    out += mono * fa;
  }
  return out;
}

// ---------------------------------------------------------------- Cartan model

PolyForm cartan_differential(const LieAlgebraAction& act, const PolyForm& P) {
  Chart E = kalkman_chart(act);
  PolyForm v = P.embed(E);
  return ext_d(v) + interior(formal_field(act), v);
}

bool is_invariant(const LieAlgebraAction& act, const PolyForm& P) {
  Chart E = kalkman_chart(act);
  PolyForm v = P.embed(E);
  for (std::size_t a = 0; a < act.rank(); ++a)
    if (!rep_lie(act, Rep::sym, a, v).is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------- decomposition

Report decomposition_check(const ActionPtr& act, int maxp, int maxq) {
  Report rep = act->certify();
  if (!rep.ok) return rep;
  const Chart& M = act->chart;
  const AlgebroidPtr& g = act->g;
  std::vector<PolyForm> forms;
  std::vector<Poly> coeffs{Poly(M, 1)};
  for (std::size_t a = 0; a < M.num_coords(); ++a) coeffs.push_back(Poly::variable(M, a));
  for (Mask m = 0; m < (Mask{1} << M.num_coords()); ++m)
    for (const auto& c : coeffs) forms.push_back(PolyForm::basis(M, m, c));

  long checked = 0;
  std::vector<std::string> bad[4];
  for (int p = 0; p <= maxp; ++p)
    for (int q = 0; q <= maxq; ++q)
      for (const auto& key : weil_keys(*g, p, q)) {
        WeilElement w = WeilElement::term(g, key, Poly(g->base(), 1));
        const int par = popcount(key.T) % 2;
        WeilElement dh = weil_dh(w), dv = weil_dv(w);
        for (const auto& a : forms) {
          KalkmanElement c = from_weil(act, w, a);
          // delta = d^h_W x 1 + theta^b x L_b
          KalkmanElement rhs = from_weil(act, dh, a);
          for (std::size_t b = 0; b < act->rank(); ++b) {
            PolyForm la = lie(act->fields[b], a);
            if (!la.is_zero()) rhs += from_weil(act, WeilElement::theta(g, b) * w, la);
          }
          std::string label = w.to_string() + " (x) " + a.to_string();
          if (ce_delta(c) != rhs) bad[0].push_back(label);
          // i_A = -mu^b x i_b with the Koszul sign of moving i_b past w
          KalkmanElement ia(act);
          for (std::size_t b = 0; b < act->rank(); ++b) {
            PolyForm ib = interior(act->fields[b], a);
            if (!ib.is_zero()) ia += from_weil(act, WeilElement::mu(g, b) * w, ib);
          }
          if (kalkman_i_A(c) != (par ? ia : -ia)) bad[1].push_back(label);
          KalkmanElement da = from_weil(act, w, ext_d(a));
          if (kalkman_d_A(c) != (par ? -da : da)) bad[2].push_back(label);
          if (kalkman_i_g(c) != from_weil(act, dv, a)) bad[3].push_back(label);
          ++checked;
        }
      }
  const char* names[4] = {"delta = d^h_W x 1 + theta^a x L_a", "i_A = -mu^a x i_a", "d_A = 1 x d",
                          "i_g = d^v_W x 1"};
  for (int k = 0; k < 4; ++k) {
    std::string detail = std::to_string(checked) + " products checked";
    if (!bad[k].empty()) detail = std::to_string(bad[k].size()) + " failures, first: " + bad[k][0];
    rep.add(names[k], bad[k].empty(), detail);
  }
  return rep;
}

KalkmanElement random_kalkman(Rng& rng, const ActionPtr& act, int slots, int k, int formdeg, unsigned terms) {
  KalkmanElement out(act);
  const std::size_t n = act->rank();
  if (slots < 0 || slots > static_cast<int>(n)) return out;
  std::vector<Mask> masks;
  for (Mask m = 0; m < (Mask{1} << n); ++m)
    if (popcount(m) == slots) masks.push_back(m);
  Chart E = kalkman_chart(*act);
  for (unsigned t = 0; t < terms; ++t) {
    Mask T = masks[rng.below(masks.size())];
    Exponents e(E.size(), 0);
    for (int s = 0; s < k; ++s) ++e[act->chart.size() + rng.below(n)];
    Poly lam = Poly::monomial(E, e, random_rat(rng));
    PolyForm f = random_form(rng, act->chart, formdeg, 1, 2).embed(E);
    out.add(T, lam * f);
  }
  return out;
}

}  // namespace weil
