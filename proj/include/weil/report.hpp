#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace weil {

struct Finding {
  std::string name;
  bool ok = true;
  std::string detail;
};

/// Outcome of a mathematical check: a verdict plus the individual findings.
/// A failing finding carries the witness in `detail`.
struct Report {
  bool ok = true;
  std::vector<Finding> findings;

  void add(std::string name, bool pass, std::string detail = {}) {
    ok = ok && pass;
    findings.push_back({std::move(name), pass, std::move(detail)});
  }
  void merge(const Report& o, const std::string& prefix = {}) {
    for (const auto& f : o.findings) add(prefix + f.name, f.ok, f.detail);
    ok = ok && o.ok;
  }
  /// Verdict of the finding with this name; throws if there is none.
  bool verdict(const std::string& name) const {
    for (const auto& f : findings)
      if (f.name == name) return f.ok;
    throw std::out_of_range("no finding named " + name);
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& f : findings) n += !f.ok;
    return n;
  }
};

}  // namespace weil
