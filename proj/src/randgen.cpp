#include "weil/randgen.hpp"

namespace weil {

Rat random_rat(Rng& rng) {
  long num = rng.range(1, 3) * (rng.coin() ? 1 : -1);
  long den = rng.below(4) == 0 ? 2 : 1;
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Poly random_poly(Rng& rng, const Chart& chart, unsigned maxdeg, unsigned terms, bool use_params) {
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < chart.size(); ++i)
    if (use_params || !chart.is_param(i)) vars.push_back(i);
  std::vector<Poly::Term> out;
  unsigned n = 1 + static_cast<unsigned>(rng.below(terms));
  for (unsigned t = 0; t < n; ++t) {
    Exponents e(chart.size(), 0);
    unsigned deg = vars.empty() ? 0 : static_cast<unsigned>(rng.below(maxdeg + 1));
    for (unsigned k = 0; k < deg; ++k) ++e[vars[rng.below(vars.size())]];
    out.emplace_back(std::move(e), random_rat(rng));
  }
  return Poly::from_terms(chart, std::move(out));
}

PolyForm random_form(Rng& rng, const Chart& chart, int k, unsigned maxdeg, unsigned terms) {
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < chart.size(); ++i)
    if (!chart.is_param(i)) coords.push_back(i);
  PolyForm f(chart);
  if (k < 0 || static_cast<std::size_t>(k) > coords.size()) return f;
  unsigned n = 1 + static_cast<unsigned>(rng.below(terms));
  for (unsigned t = 0; t < n; ++t) {
    Mask m = 0;
    while (popcount(m) < k) m |= Mask(1) << coords[rng.below(coords.size())];
    f.add_term(m, random_poly(rng, chart, maxdeg, 2));
  }
  return f;
}

}  // namespace weil
