#include "weil/algebroid.hpp"

namespace weil {

Algebroid::Algebroid(Chart base, std::size_t rank, std::vector<std::vector<Poly>> anchor,
                     const std::map<std::pair<std::size_t, std::size_t>, std::vector<Poly>>& structure)
    : base_(std::move(base)), n_(rank), anchor_(std::move(anchor)) {
  if (n_ > 64) throw DomainError("algebroid: rank too large");
  if (anchor_.size() != n_) throw DomainError("algebroid: anchor must have one row per frame section");
  for (auto& row : anchor_) {
    if (row.size() != base_.size()) throw DomainError("algebroid: anchor row length must equal base dimension");
    for (auto& p : row) p = p.embed(base_);
  }
  c_.assign(n_ * n_ * n_, Poly(base_));
  for (const auto& [jk, col] : structure) {
    auto [j, k] = jk;
    if (j >= n_ || k >= n_ || j == k) throw DomainError("algebroid: structure index out of range");
    if (col.size() != n_) throw DomainError("algebroid: structure column must have rank entries");
    for (std::size_t i = 0; i < n_; ++i) {
      Poly v = col[i].embed(base_);
      c_[(i * n_ + j) * n_ + k] = v;
      c_[(i * n_ + k) * n_ + j] = -v;
    }
  }
}

bool Algebroid::constant_structure() const {
  for (const auto& p : c_)
    if (!p.is_constant()) return false;
  return true;
}

PolyVectorField Algebroid::anchor_field(std::size_t i) const {
  return PolyVectorField(base_, anchor_.at(i));
}

PolyVectorField Algebroid::anchor_of(const Section& a) const {
  if (a.size() != n_) throw DomainError("anchor_of: section has wrong rank");
  const Chart& ch = a.empty() ? base_ : a[0].chart();
  std::vector<Poly> comps(ch.size(), Poly(ch));
  for (std::size_t a_ = 0; a_ < base_.size(); ++a_) {
    std::size_t idx = *ch.index_of(base_.name(a_));
    for (std::size_t j = 0; j < n_; ++j)
      if (!a[j].is_zero() && !anchor_[j][a_].is_zero()) comps[idx] += a[j] * anchor_[j][a_].embed(ch);
  }
  return PolyVectorField(ch, std::move(comps));
}

Algebroid Algebroid::on(const Chart& ext) const {
  Algebroid r = *this;
  r.base_ = ext;
  for (std::size_t a = 0; a < base_.size(); ++a)
    if (ext.index_of(base_.name(a)) != a) throw DomainError("Algebroid::on: chart must extend the base");
  for (auto& row : r.anchor_) {
    std::vector<Poly> nrow(ext.size(), Poly(ext));
    for (std::size_t a = 0; a < row.size(); ++a) nrow[a] = row[a].embed(ext);
    row = std::move(nrow);
  }
  for (auto& p : r.c_) p = p.embed(ext);
  return r;
}

bool Algebroid::operator==(const Algebroid& o) const {
  return base_ == o.base_ && n_ == o.n_ && anchor_ == o.anchor_ && c_ == o.c_;
}

Section frame_section(const Chart& chart, std::size_t rank, std::size_t j) {
  Section s(rank, Poly(chart));
  s.at(j) = Poly(chart, 1);
  return s;
}

Section zero_section(const Chart& chart, std::size_t rank) { return Section(rank, Poly(chart)); }

Section section_add(const Section& a, const Section& b) {
  Section r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b.at(i);
  return r;
}

Section section_scale(const Poly& f, const Section& a) {
  Section r = a;
  for (auto& x : r) x = f * x;
  return r;
}

Section section_embed(const Section& a, const Chart& c) {
  Section r;
  for (const auto& x : a) r.push_back(x.embed(c));
  return r;
}

bool section_is_zero(const Section& a) {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

Section bracket_sections(const Algebroid& P, const Section& a, const Section& b) {
  const std::size_t n = P.rank();
  if (a.size() != n || b.size() != n) throw DomainError("bracket_sections: wrong rank");
  if (n == 0) return {};
  const Chart& ch = a[0].chart();
  Section r(n, Poly(ch));
  for (std::size_t j = 0; j < n; ++j) {
    if (a[j].is_zero()) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j || b[k].is_zero()) continue;
      Poly ab = a[j] * b[k];
      for (std::size_t i = 0; i < n; ++i)
        if (!P.c(i, j, k).is_zero()) r[i] += ab * P.c(i, j, k).embed(ch);
    }
  }
  PolyVectorField ra = P.anchor_of(a), rb = P.anchor_of(b);
  for (std::size_t i = 0; i < n; ++i) r[i] += ra.apply(b[i]) - rb.apply(a[i]);
  return r;
}

static std::string section_str(const Section& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + s[i].to_string();
  return out + ")";
}

Report check_axioms(const Algebroid& P) {
  Report rep;
  const std::size_t n = P.rank();
  const Chart& ch = P.base();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      Section br = bracket_sections(P, frame_section(ch, n, j), frame_section(ch, n, k));
      PolyVectorField lhs = P.anchor_of(br);
      PolyVectorField rhs = bracket(P.anchor_field(j), P.anchor_field(k));
      bool ok = lhs == rhs;
      std::string detail;
      if (!ok) {
        for (std::size_t a = 0; a < ch.size(); ++a)
          if (lhs.comp(a) != rhs.comp(a))
            detail = "component d/d" + ch.name(a) + ": rho([e" + std::to_string(j + 1) + ",e" +
                     std::to_string(k + 1) + "]) = " + lhs.comp(a).to_string() + " but [rho e" +
                     std::to_string(j + 1) + ", rho e" + std::to_string(k + 1) + "] = " + rhs.comp(a).to_string();
      }
      rep.add("anchor morphism e" + std::to_string(j + 1) + ",e" + std::to_string(k + 1), ok, detail);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Section ei = frame_section(ch, n, i), ej = frame_section(ch, n, j), ek = frame_section(ch, n, k);
        Section s = bracket_sections(P, bracket_sections(P, ei, ej), ek);
        s = section_add(s, bracket_sections(P, bracket_sections(P, ej, ek), ei));
        s = section_add(s, bracket_sections(P, bracket_sections(P, ek, ei), ej));
        rep.add("jacobi e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) + ",e" + std::to_string(k + 1),
                section_is_zero(s), section_is_zero(s) ? "" : "cyclic sum = " + section_str(s));
      }
  return rep;
}

// ---------------------------------------------------------------- library

AlgebroidPtr lie_algebra(std::size_t n, const StructureConstants& c) {
  Chart pt;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Poly>> s;
  for (const auto& [jk, col] : c) {
    std::vector<Poly> pc;
    for (const auto& r : col) pc.emplace_back(pt, r);
    s[jk] = pc;
  }
  return std::make_shared<Algebroid>(pt, n, std::vector<std::vector<Poly>>(n), s);
}

AlgebroidPtr so3() {
  return lie_algebra(3, {{{0, 1}, {0, 0, 1}}, {{1, 2}, {1, 0, 0}}, {{0, 2}, {0, -1, 0}}});
}

AlgebroidPtr heisenberg3() { return lie_algebra(3, {{{0, 1}, {0, 0, 1}}}); }

AlgebroidPtr abelian(std::size_t n) { return lie_algebra(n, {}); }

AlgebroidPtr tangent(const std::vector<std::string>& coords) {
  Chart ch(coords);
  std::vector<std::vector<Poly>> anchor;
  for (std::size_t i = 0; i < ch.size(); ++i) {
    std::vector<Poly> row(ch.size(), Poly(ch));
    row[i] = Poly(ch, 1);
    anchor.push_back(row);
  }
  return std::make_shared<Algebroid>(ch, ch.size(), anchor,
                                     std::map<std::pair<std::size_t, std::size_t>, std::vector<Poly>>{});
}

AlgebroidPtr action(const Algebroid& g, const std::vector<PolyVectorField>& fields) {
  const std::size_t n = g.rank();
  if (fields.size() != n) throw DomainError("action: need one vector field per basis element");
  if (g.dim() != 0) throw DomainError("action: first argument must be a Lie algebra");
  const Chart& ch = fields.empty() ? Chart() : fields[0].chart();
  std::vector<std::vector<Poly>> anchor;
  for (const auto& X : fields) {
    if (X.chart() != ch) throw DomainError("action: fields on different charts");
    anchor.push_back(X.comps());
  }
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Poly>> s;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      std::vector<Poly> col;
      PolyVectorField expect(ch);
      for (std::size_t i = 0; i < n; ++i) {
        Poly ci = g.c(i, j, k).embed(ch);
        col.push_back(ci);
        expect = expect + fields[i] * ci;
      }
      if (bracket(fields[j], fields[k]) != expect)
        throw DomainError("action: vector fields do not satisfy the bracket relations");
      s[{j, k}] = col;
    }
  return std::make_shared<Algebroid>(ch, n, anchor, s);
}

AlgebroidPtr so3_on_r3() {
  Chart ch({"x", "y", "z"});
  Poly x = Poly::variable(ch, 0), y = Poly::variable(ch, 1), z = Poly::variable(ch, 2), o(ch);
  // rho(e_i) = -eps_{ijk} x_j d/dx_k
  std::vector<PolyVectorField> f = {PolyVectorField(ch, {o, z, -y}), PolyVectorField(ch, {-z, o, x}),
                                    PolyVectorField(ch, {y, -x, o})};
  return action(*so3(), f);
}

AlgebroidPtr cotangent_poisson(const Poly& f0, int orientation) {
  Chart ch({"x", "y"});
  Poly f = f0.embed(ch);
  Poly s(ch, orientation);
  std::vector<std::vector<Poly>> anchor = {{Poly(ch), s * f}, {-(s * f), Poly(ch)}};
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Poly>> c = {{{0, 1}, {f.partial(0), f.partial(1)}}};
  return std::make_shared<Algebroid>(ch, 2, anchor, c);
}

}  // namespace weil
