#include "weil/cohomology.hpp"

#include <algorithm>
#include <functional>

namespace weil {

namespace {

// Exponent vectors on n variables with total degree <= maxdeg, in grlex order.
std::vector<Exponents> monomials(std::size_t n, int maxdeg) {
  std::vector<Exponents> out;
  if (maxdeg < 0) return out;
  Exponents e(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      out.push_back(e);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[i] = static_cast<std::uint16_t>(v);
      rec(i + 1, left - v);
    }
    e[i] = 0;
  };
  rec(0, maxdeg);
  std::sort(out.begin(), out.end(), grlex_less);
  return out;
}

// Masks of size k among n bits, increasing.
std::vector<Mask> masks_of_size(std::size_t n, int k) {
  std::vector<Mask> out;
  for (Mask m = 0; m < (Mask(1) << n); ++m)
    if (popcount(m) == k) out.push_back(m);
  return out;
}

int key_weight(const WeilKey& k) { return popcount(k.D) + popcount(k.T) + static_cast<int>(total_degree(k.e)); }

int mono_bound(const WeilKey& k, int D, Truncation mode) {
  switch (mode) {
    case Truncation::none: return 0;
    case Truncation::degree: return D;
    case Truncation::weight: return D - key_weight(k);
  }
  return 0;
}

RankResult assemble_result(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& ranks) {
  RankResult r{dims, ranks, {}};
  for (std::size_t n = 0; n < dims.size(); ++n)
    r.betti.push_back(static_cast<long>(dims[n]) - static_cast<long>(ranks[n]) -
                      (n ? static_cast<long>(ranks[n - 1]) : 0L));
  return r;
}

}  // namespace

bool BasisElementLess::operator()(const BasisElement& a, const BasisElement& b) const {
  WeilKeyLess kl;
  if (kl(a.key, b.key)) return true;
  if (kl(b.key, a.key)) return false;
  return grlex_less(a.mono, b.mono);
}

std::size_t BasisSlice::find(const WeilKey& k, const Exponents& mono) const {
  auto it = index_.find(BasisElement{k, mono});
  return it == index_.end() ? size() : it->second;
}

void BasisSlice::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (!index_.emplace(elems[i], i).second) throw DomainError("BasisSlice: repeated basis element");
}

WeilElement BasisSlice::element(const AlgebroidPtr& P, std::size_t i) const {
  return WeilElement::term(P, elems.at(i).key, Poly::monomial(P->base(), elems[i].mono));
}

BasisSlice enumerate_basis(const Algebroid& P, int p, int q, int D, Truncation mode) {
  if (mode == Truncation::none && P.dim() > 0) throw DomainError("enumerate_basis: an unbounded slice needs dim M = 0");
  if (mode != Truncation::none && D < 0) throw DomainError("enumerate_basis: D must be >= 0");
  BasisSlice s;
  s.D = D;
  s.mode = mode;
  for (const auto& k : weil_keys(P, p, q))
    for (const auto& m : monomials(P.dim(), mono_bound(k, D, mode))) s.elems.push_back({k, m});
  s.reindex();
  return s;
}

BasisSlice total_basis(const Algebroid& P, int n, int D, Truncation mode) {
  BasisSlice s;
  s.D = D;
  s.mode = mode;
  for (int p = 0; p <= n; ++p) {
    BasisSlice part = enumerate_basis(P, p, n - p, D, mode);
    s.elems.insert(s.elems.end(), part.elems.begin(), part.elems.end());
  }
  s.reindex();
  return s;
}

SparseVec coordinates(const WeilElement& w, const BasisSlice& slice) {
  SparseVec v;
  for (const auto& [k, c] : w.terms())
    for (const auto& [e, r] : c.terms()) {
      std::size_t i = slice.find(k, e);
      if (i == slice.size())
        throw TruncationError("term " + WeilElement::term(w.presentation(), k, Poly::monomial(c.chart(), e, r)).to_string() +
                              " lies outside the slice");
      v[i] += r;
    }
  return v;
}

SparseMatrix assemble_matrix(const AlgebroidPtr& P, WeilDiff d, const BasisSlice& dom, const BasisSlice& cod) {
  SparseMatrix m(cod.size(), dom.size());
  for (std::size_t j = 0; j < dom.size(); ++j) {
    WeilElement b = dom.element(P, j);
    WeilElement img = d == WeilDiff::dh ? weil_dh(b) : d == WeilDiff::dv ? weil_dv(b) : weil_dh(b) + weil_dv(b);
    try {
      m.set_column(j, coordinates(img, cod));
    } catch (const TruncationError& e) {
      throw TruncationError("image of " + b.to_string() + ": " + e.what());
    }
  }
  return m;
}

RankResult betti_total(const AlgebroidPtr& P, int maxdeg, int D, Truncation mode) {
  std::vector<std::size_t> dims, ranks;
  BasisSlice cur = total_basis(*P, 0, D, mode);
  for (int n = 0; n <= maxdeg; ++n) {
    BasisSlice next = total_basis(*P, n + 1, D, mode);
    dims.push_back(cur.size());
    ranks.push_back(rank(assemble_matrix(P, WeilDiff::total, cur, next)));
    cur = std::move(next);
  }
  return assemble_result(dims, ranks);
}

RankResult betti_row(const AlgebroidPtr& P, int q, int maxp, int D, Truncation mode) {
  std::vector<std::size_t> dims, ranks;
  BasisSlice cur = enumerate_basis(*P, 0, q, D, mode);
  for (int p = 0; p <= maxp; ++p) {
    BasisSlice next = enumerate_basis(*P, p + 1, q, D, mode);
    dims.push_back(cur.size());
    ranks.push_back(rank(assemble_matrix(P, WeilDiff::dh, cur, next)));
    cur = std::move(next);
  }
  return assemble_result(dims, ranks);
}

ActionPtr point_action(const AlgebroidPtr& g) {
  if (g->dim() != 0) throw DomainError("point_action: expects a Lie algebra");
  return make_action(g, Chart(), std::vector<PolyVectorField>(g->rank(), PolyVectorField(Chart())));
}

RankResult ce_betti(const AlgebroidPtr& g, int q, int maxp) {
  ActionPtr act = point_action(g);
  const std::size_t n = g->rank();
  const Chart E = kalkman_chart(*act);
  // lambda-monomials of degree exactly q.
  std::vector<Exponents> lam;
  for (const auto& e : monomials(n, q))
    if (static_cast<int>(total_degree(e)) == q) lam.push_back(e);

  auto basis = [&](int p) {
    std::vector<KalkmanElement> out;
    for (Mask T : masks_of_size(n, p))
      for (const auto& e : lam)
        out.push_back(KalkmanElement::value(act, T, PolyForm::function(Poly::monomial(E, e))));
    return out;
  };
  auto coords = [&](const KalkmanElement& c, int p) {
    std::map<std::pair<Mask, Exponents>, std::size_t> idx;
    std::size_t i = 0;
    for (Mask T : masks_of_size(n, p))
      for (const auto& e : lam) idx[{T, e}] = i++;
    SparseVec v;
    for (const auto& [T, val] : c.comps())
      for (const auto& [m, poly] : val.comps()) {
        if (m != 0) throw DomainError("ce_betti: unexpected form degree");
        for (const auto& [e, r] : poly.terms()) v[idx.at({T, e})] += r;
      }
    return v;
  };

  std::vector<std::size_t> dims, ranks;
  for (int p = 0; p <= maxp; ++p) {
    auto b = basis(p);
    std::vector<SparseVec> cols;
    for (const auto& c : b) cols.push_back(coords(ce_delta(c, Rep::sym), p + 1));
    dims.push_back(b.size());
    ranks.push_back(rank(cols));
  }
  return assemble_result(dims, ranks);
}

namespace {

void require_affine(const PolyMap& F, const std::string& what) {
  for (const auto& c : F.comps())
    if (c.degree() > 1) throw DomainError("bott_shulman_row_cohomology: " + what + " is not affine");
}

struct FormIndex {
  std::map<std::pair<Mask, Exponents>, std::size_t> idx;
  std::vector<PolyForm> forms;
};

FormIndex form_basis(const Chart& c, int q, int maxdeg) {
  FormIndex f;
  for (Mask m : masks_of_size(c.size(), q))
    for (const auto& e : monomials(c.size(), maxdeg)) {
      f.idx[{m, e}] = f.forms.size();
      f.forms.push_back(PolyForm::basis(c, m, Poly::monomial(c, e)));
    }
  return f;
}

SparseVec form_coordinates(const PolyForm& w, const FormIndex& f) {
  SparseVec v;
  for (const auto& [m, c] : w.comps())
    for (const auto& [e, r] : c.terms()) {
      auto it = f.idx.find({m, e});
      if (it == f.idx.end()) throw TruncationError("form " + w.to_string() + " lies outside the slice");
      v[it->second] += r;
    }
  return v;
}

}  // namespace

RankResult bott_shulman_row_cohomology(const SplitGroupoid& G, int q, int pmax, int D) {
  if (q < 0 || pmax < 0) throw DomainError("bott_shulman_row_cohomology: negative degree");
  for (int p = 1; p <= pmax + 1; ++p)
    for (int i = 0; i <= p; ++i) require_affine(nerve_face(G, p, i), "face d_" + std::to_string(i));
  for (int p = 0; p <= pmax; ++p)
    for (int i = 0; i <= p; ++i) require_affine(nerve_degeneracy(G, p, i), "degeneracy s_" + std::to_string(i));

  std::vector<FormIndex> levels;
  for (int p = 0; p <= pmax + 1; ++p) levels.push_back(form_basis(G.nerve_chart(p), q, D - q));

  std::vector<std::size_t> dims, ranks;
  for (int p = 0; p <= pmax; ++p) {
    // The normalized slice is spanned by the projections of the ambient basis.
    std::vector<SparseVec> span, images;
    for (const auto& b : levels[p].forms) {
      BSForm nb = normalize(G, BSForm{p, b});
      span.push_back(form_coordinates(nb.form, levels[p]));
      images.push_back(form_coordinates(bs_delta(G, nb).form, levels[p + 1]));
    }
    dims.push_back(rank(span));
    ranks.push_back(rank(images));
  }
  return assemble_result(dims, ranks);
}

}  // namespace weil
