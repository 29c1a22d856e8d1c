#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace weil {

using Rat = mpq_class;

std::string rat_to_string(const Rat& r);

/// Raised for malformed textual input. `pos` is a byte offset into the text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t pos() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Raised when an operation's preconditions are violated (mismatched charts,
/// out-of-range indices, wrong degrees, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class VarKind { coordinate, parameter };

/// An ordered list of named polynomial variables. Coordinates carry
/// differentials; parameters (formal symmetric arguments, homotopy variables)
/// are treated as constants by d and never appear in form keys.
class Chart {
 public:
  Chart();
  explicit Chart(std::vector<std::string> coords);
  Chart(std::vector<std::string> names, std::vector<VarKind> kinds);

  std::size_t size() const { return d_->names.size(); }
  const std::string& name(std::size_t i) const { return d_->names.at(i); }
  VarKind kind(std::size_t i) const { return d_->kinds.at(i); }
  bool is_param(std::size_t i) const { return kind(i) == VarKind::parameter; }
  const std::vector<std::string>& names() const { return d_->names; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t num_coords() const;

  bool operator==(const Chart& o) const;
  bool operator!=(const Chart& o) const { return !(*this == o); }

 private:
  struct Data {
    std::vector<std::string> names;
    std::vector<VarKind> kinds;
    std::unordered_map<std::string, std::size_t> index;
  };
  std::shared_ptr<const Data> d_;
};

/// Appends fresh variables; throws on a name collision.
Chart chart_extend(const Chart& c, const std::vector<std::string>& fresh,
                   VarKind kind = VarKind::parameter);

using Exponents = std::vector<std::uint16_t>;

/// Graded lexicographic comparison (total degree first).
bool grlex_less(const Exponents& a, const Exponents& b);
unsigned total_degree(const Exponents& e);

/// Sparse multivariate polynomial with exact rational coefficients.
/// Terms are kept sorted ascending in graded-lex order with no zero coefficients.
class Poly {
 public:
  using Term = std::pair<Exponents, Rat>;

  Poly() = default;
  explicit Poly(Chart chart) : chart_(std::move(chart)) {}
  Poly(Chart chart, const Rat& c);

  static Poly constant(const Chart& chart, const Rat& c) { return Poly(chart, c); }
  static Poly variable(const Chart& chart, std::size_t i);
  static Poly variable(const Chart& chart, std::string_view name);
  static Poly monomial(const Chart& chart, Exponents e, const Rat& c = 1);

  const Chart& chart() const { return chart_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (zero if absent).
  Rat constant_term() const;
  /// -1 for the zero polynomial.
  int degree() const;
  /// Coefficient of a given exponent vector.
  Rat coeff(const Exponents& e) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rat& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rat& c) { return a *= c; }
  friend Poly operator*(const Rat& c, Poly a) { return a *= c; }
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly pow(unsigned k) const;
  Poly partial(std::size_t var) const;
  /// Re-express on a chart containing all variables that occur with nonzero
  /// exponent (matched by name).
  Poly embed(const Chart& target) const;

  std::string to_string() const;

  /// Internal: builds from unsorted terms, combining duplicates.
  static Poly from_terms(const Chart& chart, std::vector<Term> terms);

 private:
  void normalize();
  Chart chart_;
  std::vector<Term> terms_;
};

Poly parse_poly(std::string_view text, const Chart& chart);

/// A polynomial map F: source -> target; comps[k] is F^*(target var k),
/// a polynomial on the source chart.
class PolyMap {
 public:
  PolyMap() = default;
  PolyMap(Chart source, Chart target, std::vector<Poly> comps);

  static PolyMap identity(const Chart& c);

  const Chart& source() const { return source_; }
  const Chart& target() const { return target_; }
  const std::vector<Poly>& comps() const { return comps_; }
  const Poly& comp(std::size_t k) const { return comps_.at(k); }

  /// Extends the map to a target chart that has extra parameter variables.
  /// Each extra parameter is carried through by identity (matched by name),
  /// appended to the source if it is not already there.
  PolyMap lift(const Chart& extended_target) const;

 private:
  Chart source_, target_;
  std::vector<Poly> comps_;
};

/// p(F(s)): p lives on F.target() (or on F.target() plus parameters, which
/// are lifted through by identity).
Poly substitute(const Poly& p, const PolyMap& F);
/// G o F, i.e. first F then G.
PolyMap compose(const PolyMap& G, const PolyMap& F);

}  // namespace weil
