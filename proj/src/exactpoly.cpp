#include "weil/exactpoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace weil {

std::string rat_to_string(const Rat& r) { return r.get_str(); }

// ---------------------------------------------------------------- Chart

Chart::Chart() : Chart(std::vector<std::string>{}) {}

Chart::Chart(std::vector<std::string> coords)
    : Chart(coords, std::vector<VarKind>(coords.size(), VarKind::coordinate)) {}

Chart::Chart(std::vector<std::string> names, std::vector<VarKind> kinds) {
  if (names.size() != kinds.size()) throw DomainError("chart: names/kinds length mismatch");
  if (names.size() > 64) throw DomainError("chart: at most 64 variables are supported");
  auto d = std::make_shared<Data>();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty()) throw DomainError("chart: empty variable name");
    if (!d->index.emplace(names[i], i).second)
      throw DomainError("chart: duplicate variable '" + names[i] + "'");
  }
  d->names = std::move(names);
  d->kinds = std::move(kinds);
  d_ = std::move(d);
}

std::optional<std::size_t> Chart::index_of(std::string_view name) const {
  auto it = d_->index.find(std::string(name));
  if (it == d_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t Chart::num_coords() const {
  return static_cast<std::size_t>(
      std::count(d_->kinds.begin(), d_->kinds.end(), VarKind::coordinate));
}

bool Chart::operator==(const Chart& o) const {
  if (d_ == o.d_) return true;
  return d_->names == o.d_->names && d_->kinds == o.d_->kinds;
}

Chart chart_extend(const Chart& c, const std::vector<std::string>& fresh, VarKind kind) {
  std::vector<std::string> names = c.names();
  std::vector<VarKind> kinds;
  for (std::size_t i = 0; i < c.size(); ++i) kinds.push_back(c.kind(i));
  for (const auto& f : fresh) {
    if (c.index_of(f)) throw DomainError("chart_extend: name collision on '" + f + "'");
    names.push_back(f);
    kinds.push_back(kind);
  }
  return Chart(std::move(names), std::move(kinds));
}

// ---------------------------------------------------------------- monomials

unsigned total_degree(const Exponents& e) {
  unsigned s = 0;
  for (auto x : e) s += x;
  return s;
}

bool grlex_less(const Exponents& a, const Exponents& b) {
  unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return a < b;
}

namespace {
struct TermLess {
  bool operator()(const Poly::Term& a, const Poly::Term& b) const {
    return grlex_less(a.first, b.first);
  }
};
}  // namespace

// ---------------------------------------------------------------- Poly

Poly::Poly(Chart chart, const Rat& c) : chart_(std::move(chart)) {
  if (c != 0) terms_.emplace_back(Exponents(chart_.size(), 0), c);
}

Poly Poly::variable(const Chart& chart, std::size_t i) {
  if (i >= chart.size()) throw DomainError("Poly::variable: index out of range");
  Exponents e(chart.size(), 0);
  e[i] = 1;
  return monomial(chart, std::move(e));
}

Poly Poly::variable(const Chart& chart, std::string_view name) {
  auto i = chart.index_of(name);
  if (!i) throw DomainError("Poly::variable: unknown variable '" + std::string(name) + "'");
  return variable(chart, *i);
}

Poly Poly::monomial(const Chart& chart, Exponents e, const Rat& c) {
  if (e.size() != chart.size()) throw DomainError("Poly::monomial: exponent length mismatch");
  Poly p(chart);
  if (c != 0) p.terms_.emplace_back(std::move(e), c);
  return p;
}

Poly Poly::from_terms(const Chart& chart, std::vector<Term> terms) {
  Poly p(chart);
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

void Poly::normalize() {
  std::sort(terms_.begin(), terms_.end(), TermLess{});
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      if (!out.empty() && out.back().second == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().second == 0) out.pop_back();
  terms_ = std::move(out);
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_[0].first) == 0);
}

Rat Poly::constant_term() const {
  if (!terms_.empty() && total_degree(terms_[0].first) == 0) return terms_[0].second;
  return 0;
}

int Poly::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(total_degree(terms_.back().first));
}

Rat Poly::coeff(const Exponents& e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{e, 0}, TermLess{});
  if (it != terms_.end() && it->first == e) return it->second;
  return 0;
}

static void require_same_chart(const Chart& a, const Chart& b, const char* op) {
  if (a != b) throw DomainError(std::string(op) + ": chart mismatch");
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  require_same_chart(chart_, o.chart_, "Poly +");
  if (o.terms_.empty()) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin(), ae = terms_.end();
  auto b = o.terms_.begin(), be = o.terms_.end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && grlex_less(a->first, b->first))) {
      out.push_back(std::move(*a++));
    } else if (a == ae || grlex_less(b->first, a->first)) {
      out.push_back(*b++);
    } else {
      Rat s = a->second + b->second;
      if (s != 0) out.emplace_back(std::move(a->first), s);
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  require_same_chart(a.chart_, b.chart_, "Poly *");
  Poly r(a.chart_);
  if (a.is_zero() || b.is_zero()) return r;
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  const std::size_t n = a.chart_.size();
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      Exponents e(n);
      for (std::size_t i = 0; i < n; ++i) e[i] = ta.first[i] + tb.first[i];
      r.terms_.emplace_back(std::move(e), ta.second * tb.second);
    }
  }
  r.normalize();
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (chart_ != o.chart_) return false;
  return terms_ == o.terms_;
}

Poly Poly::pow(unsigned k) const {
  Poly r(chart_, 1);
  Poly base = *this;
  while (k) {
    if (k & 1u) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

Poly Poly::partial(std::size_t var) const {
  if (var >= chart_.size()) throw DomainError("Poly::partial: index out of range");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.first[var] == 0) continue;
    Exponents e = t.first;
    Rat c = t.second * e[var];
    --e[var];
    out.emplace_back(std::move(e), std::move(c));
  }
  return from_terms(chart_, std::move(out));
}

Poly Poly::embed(const Chart& target) const {
  if (target == chart_) return *this;
  std::vector<std::optional<std::size_t>> where(chart_.size());
  for (std::size_t i = 0; i < chart_.size(); ++i) where[i] = target.index_of(chart_.name(i));
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Exponents e(target.size(), 0);
    for (std::size_t i = 0; i < chart_.size(); ++i) {
      if (t.first[i] == 0) continue;
      if (!where[i])
        throw DomainError("Poly::embed: variable '" + chart_.name(i) + "' missing from target chart");
      e[*where[i]] = t.first[i];
    }
    out.emplace_back(std::move(e), t.second);
  }
  return from_terms(target, std::move(out));
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    Rat c = it->second;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    for (std::size_t i = 0; i < it->first.size(); ++i) {
      if (it->first[i] == 0) continue;
      std::string f = chart_.name(i);
      if (it->first[i] > 1) f += "^" + std::to_string(it->first[i]);
      factors.push_back(std::move(f));
    }
    if (factors.empty() || c != 1) factors.insert(factors.begin(), rat_to_string(c));
    for (std::size_t k = 0; k < factors.size(); ++k) os << (k ? "*" : "") << factors[k];
  }
  return os.str();
}

// ---------------------------------------------------------------- parser

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view s, const Chart& c) : s_(s), chart_(c) {}

  Poly parse() {
    Poly p = expr();
    skip_ws();
    if (i_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[i_] + "'", i_);
    return p;
  }

 private:
  static bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
  static bool ident_char(unsigned char c) { return ident_start(c) || std::isdigit(c); }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Poly expr() {
    skip_ws();
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    Poly acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+'))
        acc += term();
      else if (eat('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Poly term() {
    Poly acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }

  Poly factor() {
    Poly b = base();
    if (eat('^')) {
      skip_ws();
      std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (start == i_) throw ParseError("expected a natural exponent", i_);
      unsigned long k = std::stoul(std::string(s_.substr(start, i_ - start)));
      if (k > 1000) throw ParseError("exponent too large", start);
      b = b.pow(static_cast<unsigned>(k));
    }
    return b;
  }

  std::string digits() {
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  Poly base() {
    skip_ws();
    if (i_ >= s_.size()) throw ParseError("unexpected end of input", i_);
    unsigned char c = static_cast<unsigned char>(s_[i_]);
    if (c == '(') {
      ++i_;
      Poly p = expr();
      if (!eat(')')) throw ParseError("expected ')'", i_);
      return p;
    }
    if (std::isdigit(c)) {
      std::string num = digits();
      Rat r(num);
      if (i_ < s_.size() && s_[i_] == '/') {
        std::size_t slash = i_++;
        std::string den = digits();
        if (den.empty()) throw ParseError("expected denominator", i_);
        Rat d(den);
        if (d == 0) throw ParseError("zero denominator", slash);
        r /= d;
      }
      return Poly(chart_, r);
    }
    if (ident_start(c)) {
      std::size_t start = i_;
      while (i_ < s_.size() && ident_char(static_cast<unsigned char>(s_[i_]))) ++i_;
      std::string name(s_.substr(start, i_ - start));
      auto idx = chart_.index_of(name);
      if (!idx) throw ParseError("undeclared variable '" + name + "'", start);
      return Poly::variable(chart_, *idx);
    }
    throw ParseError(std::string("unexpected '") + s_[i_] + "'", i_);
  }

  std::string_view s_;
  const Chart& chart_;
  std::size_t i_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, const Chart& chart) { return PolyParser(text, chart).parse(); }

// ---------------------------------------------------------------- PolyMap

PolyMap::PolyMap(Chart source, Chart target, std::vector<Poly> comps)
    : source_(std::move(source)), target_(std::move(target)), comps_(std::move(comps)) {
  if (comps_.size() != target_.size()) throw DomainError("PolyMap: one component per target variable");
  for (const auto& c : comps_)
    if (c.chart() != source_) throw DomainError("PolyMap: component not on the source chart");
}

PolyMap PolyMap::identity(const Chart& c) {
  std::vector<Poly> comps;
  for (std::size_t i = 0; i < c.size(); ++i) comps.push_back(Poly::variable(c, i));
  return PolyMap(c, c, std::move(comps));
}

PolyMap PolyMap::lift(const Chart& ext) const {
  if (ext == target_) return *this;
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    if (target_.index_of(ext.name(i))) continue;
    if (!ext.is_param(i))
      throw DomainError("PolyMap::lift: extra variable '" + ext.name(i) + "' is not a parameter");
    if (!source_.index_of(ext.name(i))) missing.push_back(ext.name(i));
  }
  for (std::size_t k = 0; k < target_.size(); ++k)
    if (!ext.index_of(target_.name(k))) throw DomainError("PolyMap::lift: target variable dropped");
  Chart src = missing.empty() ? source_ : chart_extend(source_, missing, VarKind::parameter);
  std::vector<Poly> comps;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    auto k = target_.index_of(ext.name(i));
    if (k)
      comps.push_back(comps_[*k].embed(src));
    else
      comps.push_back(Poly::variable(src, ext.name(i)));
  }
  return PolyMap(src, ext, std::move(comps));
}

Poly substitute(const Poly& p, const PolyMap& F0) {
  const PolyMap* Fp = &F0;
  PolyMap lifted;
  if (p.chart() != F0.target()) {
    lifted = F0.lift(p.chart());
    Fp = &lifted;
  }
  const Chart& src = Fp->source();
  const std::size_t n = p.chart().size();
  std::vector<std::vector<Poly>> powers(n);
  auto power = [&](std::size_t k, unsigned e) -> const Poly& {
    auto& v = powers[k];
    if (v.empty()) v.push_back(Poly(src, 1));
    while (v.size() <= e) v.push_back(v.back() * Fp->comp(k));
    return v[e];
  };
  Poly out(src);
  for (const auto& t : p.terms()) {
    Poly m(src, t.second);
    for (std::size_t k = 0; k < n; ++k)
      if (t.first[k]) m = m * power(k, t.first[k]);
    out += m;
  }
  return out;
}

PolyMap compose(const PolyMap& G, const PolyMap& F) {
  std::vector<Poly> comps;
  comps.reserve(G.comps().size());
  for (const auto& g : G.comps()) comps.push_back(substitute(g.embed(F.target()), F));
  return PolyMap(F.source(), G.target(), std::move(comps));
}

}  // namespace weil
