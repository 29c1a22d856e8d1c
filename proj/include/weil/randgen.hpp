#pragma once

#include <cstdint>
#include <random>

#include "weil/polyforms.hpp"

namespace weil {

/// Seeded generator built on the raw mt19937_64 stream only, so draws are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t next() { return g_(); }
  /// Uniform-ish integer in [0, n).
  std::size_t below(std::size_t n) { return n ? static_cast<std::size_t>(g_() % n) : 0; }
  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::size_t>(hi - lo + 1))); }
  bool coin() { return g_() & 1u; }

 private:
  std::mt19937_64 g_;
};

/// Small nonzero rational like 2, -1/2, 3.
Rat random_rat(Rng& rng);
/// Random polynomial in the coordinates of `chart` with total degree <= maxdeg
/// and at most `terms` terms. Parameters are left out unless `use_params`.
Poly random_poly(Rng& rng, const Chart& chart, unsigned maxdeg, unsigned terms, bool use_params = false);
/// Random homogeneous form of degree k.
PolyForm random_form(Rng& rng, const Chart& chart, int k, unsigned maxdeg, unsigned terms);

}  // namespace weil
