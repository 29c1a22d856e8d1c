#include "weil/polyforms.hpp"

#include <cctype>

namespace weil {

int shuffle_sign(Mask a, Mask b) {
  if (a & b) return 0;
  // Count pairs (i in a, j in b) with i > j.
  int inv = 0;
  Mask bb = b;
  while (bb) {
    int j = __builtin_ctzll(bb);
    bb &= bb - 1;
    Mask above = (j == 63) ? 0 : (a >> (j + 1));
    inv += popcount(above);
  }
  return (inv & 1) ? -1 : 1;
}

bool MaskLess::operator()(Mask a, Mask b) const {
  int pa = popcount(a), pb = popcount(b);
  if (pa != pb) return pa < pb;
  // Lexicographic on increasing index lists.
  while (a && b) {
    int ia = __builtin_ctzll(a), ib = __builtin_ctzll(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

// ---------------------------------------------------------------- vector fields

PolyVectorField::PolyVectorField(Chart chart) : chart_(std::move(chart)) {
  for (std::size_t i = 0; i < chart_.size(); ++i) comps_.emplace_back(chart_);
}

PolyVectorField::PolyVectorField(Chart chart, std::vector<Poly> comps)
    : chart_(std::move(chart)), comps_(std::move(comps)) {
  if (comps_.size() != chart_.size()) throw DomainError("vector field: one component per variable");
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    if (comps_[i].chart() != chart_) throw DomainError("vector field: component chart mismatch");
    if (chart_.is_param(i) && !comps_[i].is_zero())
      throw DomainError("vector field: nonzero component along parameter '" + chart_.name(i) + "'");
  }
}

Poly PolyVectorField::apply(const Poly& f) const {
  if (f.chart() != chart_) throw DomainError("vector field apply: chart mismatch");
  Poly r(chart_);
  for (std::size_t k = 0; k < comps_.size(); ++k)
    if (!comps_[k].is_zero()) r += comps_[k] * f.partial(k);
  return r;
}

PolyVectorField PolyVectorField::operator+(const PolyVectorField& o) const {
  if (o.chart_ != chart_) throw DomainError("vector field +: chart mismatch");
  std::vector<Poly> c = comps_;
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += o.comps_[k];
  return PolyVectorField(chart_, std::move(c));
}

PolyVectorField PolyVectorField::operator*(const Poly& f) const {
  std::vector<Poly> c = comps_;
  for (auto& x : c) x = f * x;
  return PolyVectorField(chart_, std::move(c));
}

PolyVectorField PolyVectorField::embed(const Chart& c) const {
  if (c == chart_) return *this;
  std::vector<Poly> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto k = chart_.index_of(c.name(i));
    out.push_back(k ? comps_[*k].embed(c) : Poly(c));
  }
  for (std::size_t k = 0; k < chart_.size(); ++k)
    if (!comps_[k].is_zero() && !c.index_of(chart_.name(k)))
      throw DomainError("vector field embed: variable missing from target");
  return PolyVectorField(c, std::move(out));
}

PolyVectorField bracket(const PolyVectorField& X, const PolyVectorField& Y) {
  std::vector<Poly> c;
  for (std::size_t k = 0; k < X.chart().size(); ++k) c.push_back(X.apply(Y.comp(k)) - Y.apply(X.comp(k)));
  return PolyVectorField(X.chart(), std::move(c));
}

// ---------------------------------------------------------------- forms

PolyForm PolyForm::function(const Poly& f) {
  PolyForm r(f.chart());
  r.add_term(0, f);
  return r;
}

PolyForm PolyForm::basis(const Chart& c, Mask m, const Poly& coeff) {
  PolyForm r(c);
  r.add_term(m, coeff);
  return r;
}

PolyForm PolyForm::differential(const Chart& c, std::size_t i) {
  if (c.is_param(i)) throw DomainError("differential of a parameter");
  return basis(c, Mask(1) << i, Poly(c, 1));
}

Poly PolyForm::coeff(Mask m) const {
  auto it = comps_.find(m);
  return it == comps_.end() ? Poly(chart_) : it->second;
}

int PolyForm::max_degree() const {
  if (comps_.empty()) return -1;
  return popcount(comps_.rbegin()->first);
}

bool PolyForm::is_homogeneous() const {
  return comps_.empty() || popcount(comps_.begin()->first) == popcount(comps_.rbegin()->first);
}

PolyForm PolyForm::part(int k) const {
  PolyForm r(chart_);
  for (const auto& [m, c] : comps_)
    if (popcount(m) == k) r.comps_.emplace(m, c);
  return r;
}

void PolyForm::add_term(Mask m, const Poly& c) {
  if (c.chart() != chart_) throw DomainError("form: coefficient chart mismatch");
  for (Mask mm = m; mm; mm &= mm - 1) {
    std::size_t i = static_cast<std::size_t>(__builtin_ctzll(mm));
    if (i >= chart_.size() || chart_.is_param(i)) throw DomainError("form: key outside coordinates");
  }
  if (c.is_zero()) return;
  auto [it, fresh] = comps_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) comps_.erase(it);
  }
}

PolyForm PolyForm::operator-() const {
  PolyForm r = *this;
  for (auto& [m, c] : r.comps_) c = -c;
  return r;
}

PolyForm& PolyForm::operator+=(const PolyForm& o) {
  if (o.chart_ != chart_) throw DomainError("form +: chart mismatch");
  for (const auto& [m, c] : o.comps_) add_term(m, c);
  return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) { return *this += -o; }

PolyForm operator*(const Rat& c, const PolyForm& a) {
  PolyForm r(a.chart_);
  if (c == 0) return r;
  r = a;
  for (auto& [m, p] : r.comps_) p *= c;
  return r;
}

PolyForm operator*(const Poly& f, const PolyForm& a) {
  PolyForm r(a.chart_);
  for (const auto& [m, p] : a.comps_) r.add_term(m, f * p);
  return r;
}

PolyForm PolyForm::embed(const Chart& c) const {
  if (c == chart_) return *this;
  PolyForm r(c);
  for (const auto& [m, p] : comps_) {
    Mask nm = 0;
    for (Mask mm = m; mm; mm &= mm - 1) {
      auto k = c.index_of(chart_.name(static_cast<std::size_t>(__builtin_ctzll(mm))));
      if (!k) throw DomainError("form embed: coordinate missing from target");
      nm |= Mask(1) << *k;
    }
    // Reordering coordinates may permute the wedge factors.
    std::vector<std::size_t> order;
    for (Mask mm = m; mm; mm &= mm - 1)
      order.push_back(*c.index_of(chart_.name(static_cast<std::size_t>(__builtin_ctzll(mm)))));
    int inv = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size(); ++j)
        if (order[i] > order[j]) ++inv;
    Poly q = p.embed(c);
    if (inv & 1) q = -q;
    r.add_term(nm, q);
  }
  return r;
}

std::string PolyForm::to_string() const {
  if (comps_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : comps_) {
    std::string diff;
    for (Mask mm = m; mm; mm &= mm - 1) {
      if (!diff.empty()) diff += "^";
      diff += "d" + chart_.name(static_cast<std::size_t>(__builtin_ctzll(mm)));
    }
    std::string coef;
    bool neg = false;
    if (c.terms().size() == 1) {
      Poly a = c;
      if (c.terms()[0].second < 0) {
        neg = true;
        a = -c;
      }
      coef = a.to_string();
      if (!diff.empty() && coef == "1") coef.clear();
    } else {
      coef = diff.empty() ? c.to_string() : "(" + c.to_string() + ")";
    }
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    first = false;
    out += coef;
    if (!diff.empty()) out += (coef.empty() ? "" : " ") + diff;
  }
  return out;
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
  if (a.chart() != b.chart()) throw DomainError("wedge: chart mismatch");
  PolyForm r(a.chart());
  for (const auto& [ma, ca] : a.comps())
    for (const auto& [mb, cb] : b.comps()) {
      int s = shuffle_sign(ma, mb);
      if (!s) continue;
      Poly c = ca * cb;
      r.add_term(ma | mb, s < 0 ? -c : c);
    }
  return r;
}

PolyForm ext_d(const PolyForm& a) {
  const Chart& ch = a.chart();
  PolyForm r(ch);
  for (const auto& [m, c] : a.comps())
    for (std::size_t j = 0; j < ch.size(); ++j) {
      if (ch.is_param(j) || (m >> j & 1)) continue;
      Poly dj = c.partial(j);
      if (dj.is_zero()) continue;
      // d x_j moved past the indices below j.
      int below = popcount(m & ((Mask(1) << j) - 1));
      r.add_term(m | (Mask(1) << j), (below & 1) ? -dj : dj);
    }
  return r;
}

PolyForm interior(const PolyVectorField& X, const PolyForm& a) {
  if (X.chart() != a.chart()) throw DomainError("interior: chart mismatch");
  PolyForm r(a.chart());
  for (const auto& [m, c] : a.comps()) {
    int pos = 0;
    for (Mask mm = m; mm; mm &= mm - 1, ++pos) {
      std::size_t i = static_cast<std::size_t>(__builtin_ctzll(mm));
      if (X.comp(i).is_zero()) continue;
      Poly t = X.comp(i) * c;
      r.add_term(m & ~(Mask(1) << i), (pos & 1) ? -t : t);
    }
  }
  return r;
}

PolyForm lie(const PolyVectorField& X, const PolyForm& a) {
  return ext_d(interior(X, a)) + interior(X, ext_d(a));
}

PolyForm pullback(const PolyMap& F0, const PolyForm& a) {
  PolyMap F = (a.chart() == F0.target()) ? F0 : F0.lift(a.chart());
  const Chart& src = F.source();
  std::vector<std::optional<PolyForm>> dF(a.chart().size());
  PolyForm r(src);
  for (const auto& [m, c] : a.comps()) {
    PolyForm t = PolyForm::function(substitute(c, F));
    for (Mask mm = m; mm && !t.is_zero(); mm &= mm - 1) {
      std::size_t i = static_cast<std::size_t>(__builtin_ctzll(mm));
      if (!dF[i]) dF[i] = ext_d(PolyForm::function(F.comp(i)));
      t = wedge(t, *dF[i]);
    }
    r += t;
  }
  return r;
}

// ---------------------------------------------------------------- parser

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Tries to read a differential monomial "dA^dB..." occupying exactly s.
// Returns false if s is not of that shape.
bool parse_diff(std::string_view s, const Chart& ch, Mask& mask, int& sign) {
  mask = 0;
  sign = 1;
  std::vector<std::size_t> order;
  std::size_t i = 0;
  while (true) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i >= s.size() || s[i] != 'd') return false;
    ++i;
    std::size_t st = i;
    while (i < s.size() && !is_space(s[i]) && s[i] != '^') ++i;
    auto k = ch.index_of(s.substr(st, i - st));
    if (!k || ch.is_param(*k)) return false;
    order.push_back(*k);
    while (i < s.size() && is_space(s[i])) ++i;
    if (i == s.size()) break;
    if (s[i] != '^') return false;
    ++i;
  }
  for (std::size_t a = 0; a < order.size(); ++a) {
    if (mask >> order[a] & 1) sign = 0;
    mask |= Mask(1) << order[a];
    for (std::size_t b = a + 1; b < order.size(); ++b)
      if (order[a] > order[b]) sign = -sign;
  }
  return true;
}

}  // namespace

PolyForm parse_form(std::string_view text, const Chart& ch) {
  PolyForm out(ch);
  // Split at top-level '+' / '-'.
  std::vector<std::pair<std::size_t, std::size_t>> chunks;
  std::vector<int> signs;
  int depth = 0;
  std::size_t start = 0;
  int sign = 1;
  auto flush = [&](std::size_t end) {
    std::size_t a = start, b = end;
    while (a < b && is_space(text[a])) ++a;
    while (b > a && is_space(text[b - 1])) --b;
    if (a == b) throw ParseError("empty term", a);
    chunks.emplace_back(a, b);
    signs.push_back(sign);
  };
  std::size_t i = 0;
  while (i < text.size() && is_space(text[i])) ++i;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    sign = text[i] == '-' ? -1 : 1;
    ++i;
  }
  start = i;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') {
      if (--depth < 0) throw ParseError("unbalanced ')'", i);
    }
    if (depth == 0 && (c == '+' || c == '-')) {
      flush(i);
      sign = c == '-' ? -1 : 1;
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced '('", text.size());
  flush(text.size());

  for (std::size_t k = 0; k < chunks.size(); ++k) {
    auto [a, b] = chunks[k];
    std::string_view s = text.substr(a, b - a);
    Mask m = 0;
    int ds = 1;
    Poly coeff(ch, 1);
    if (!parse_diff(s, ch, m, ds)) {
      // Find the split point: last top-level space or '*' after which a
      // differential monomial follows.
      bool found = false;
      int dep = 0;
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] == '(') ++dep;
        if (s[j] == ')') --dep;
        if (dep != 0 || !(is_space(s[j]) || s[j] == '*')) continue;
        Mask mm;
        int ss;
        if (parse_diff(s.substr(j + 1), ch, mm, ss)) {
          std::string_view head = s.substr(0, j);
          while (!head.empty() && (is_space(head.back()) || head.back() == '*')) head.remove_suffix(1);
          if (head.empty()) continue;
          try {
            coeff = parse_poly(head, ch);
          } catch (const ParseError& e) {
            throw ParseError(std::string("in form coefficient: ") + e.what(), a + e.pos());
          }
          m = mm;
          ds = ss;
          found = true;
          break;
        }
      }
      if (!found) {
        try {
          coeff = parse_poly(s, ch);
        } catch (const ParseError& e) {
          throw ParseError(std::string("in form term: ") + e.what(), a + e.pos());
        }
        m = 0;
        ds = 1;
      }
    }
    if (ds == 0) continue;
    if (signs[k] * ds < 0) coeff = -coeff;
    out.add_term(m, coeff);
  }
  return out;
}

}  // namespace weil
