#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace weil::cli {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw InputError(where + ": unknown key \"" + k + "\"");
}

const Json& need(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing key \"" + key + "\"");
  return j.at(key);
}

void check_kind(const Json& j, const std::string& kind, bool required) {
  if (!j.contains("kind")) {
    if (required) throw InputError("missing key \"kind\"");
    return;
  }
  if (!j["kind"].is_string() || j["kind"].get<std::string>() != kind)
    throw InputError("expected kind \"" + kind + "\", got " + j["kind"].dump());
}

std::vector<std::string> strings(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (!s.is_string()) throw InputError(where + ": expected an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<int>();
}

Poly poly_at(const std::string& text, const Chart& c, const std::string& where) {
  try {
    return parse_poly(text, c);
  } catch (const ParseError& e) {
    throw InputError(where + ": " + e.what());
  }
}

PolyForm form_at(const std::string& text, const Chart& c, const std::string& where) {
  try {
    return parse_form(text, c);
  } catch (const ParseError& e) {
    throw InputError(where + ": " + e.what());
  }
}

std::vector<Poly> polys(const Json& j, const Chart& c, std::size_t n, const std::string& where) {
  auto s = strings(j, where);
  if (s.size() != n) throw InputError(where + ": expected " + std::to_string(n) + " entries");
  std::vector<Poly> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(poly_at(s[i], c, where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::string> default_fiber_names(std::size_t d) {
  static const char* letters[] = {"u", "v", "w"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back(d <= 3 ? letters[i] : "u" + std::to_string(i + 1));
  return out;
}

struct Input {
  std::string path, bytes;
  Json json;
};

Input load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  Input in{path, ss.str(), {}};
  try {
    in.json = Json::parse(in.bytes);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return in;
}

Json findings_json(const Report& r) {
  Json a = Json::array();
  for (const auto& f : r.findings) {
    Json o;
    o["name"] = f.name;
    o["ok"] = f.ok;
    if (!f.detail.empty()) o["detail"] = f.detail;
    a.push_back(o);
  }
  return a;
}

template <class T>
Json array_of(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x);
  return a;
}

struct Common {
  std::uint64_t seed = 0;
  unsigned samples = 20;
  bool timings = false;
};

class Command {
 public:
  Command(std::string name, const Common& c) : common_(c), start_(std::chrono::steady_clock::now()) {
    report_["command"] = std::move(name);
    report_["inputs"] = Json::array();
    report_["seed"] = c.seed;
  }
  void input(const Input& in) { report_["inputs"].push_back({{"path", in.path}, {"sha256", sha256_hex(in.bytes)}}); }
  Json& operator[](const std::string& k) { return report_[k]; }
  int finish(const Report& r, std::ostream& out) {
    report_["ok"] = r.ok;
    report_["findings"] = findings_json(r);
    if (common_.timings) {
      auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
      report_["timings"] = {{"total_ms", ms}};
    }
    out << report_.dump(2) << "\n";
    return r.ok ? 0 : 1;
  }

 private:
  const Common& common_;
  std::chrono::steady_clock::time_point start_;
  Json report_;
};

std::string kind_of(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw InputError("missing key \"kind\"");
  return j["kind"].get<std::string>();
}

int cmd_check(const std::string& path, const Common& c, std::ostream& out) {
  Input in = load(path);
  Command cmd("check", c);
  cmd.input(in);
  std::string kind = kind_of(in.json);
  cmd["kind"] = kind;
  Report r;
  if (kind == "algebroid") {
    AlgebroidPtr P = read_algebroid(in.json);
    r.merge(check_axioms(*P), "axioms: ");
    r.merge(check_d2(P, c.seed, c.samples), "d2: ");
  } else if (kind == "groupoid") {
    SplitGroupoid G = read_groupoid(in.json);
    Report g = check_groupoid(G);
    r.merge(g, "groupoid: ");
    if (g.ok) {
      AlgebroidPtr P = lie_algebroid_of(G);
      r.merge(check_axioms(*P), "algebroid: ");
      r.merge(check_d2(P, c.seed, c.samples), "d2: ");
    }
  } else {
    throw InputError("check: expected kind algebroid or groupoid, got \"" + kind + "\"");
  }
  return cmd.finish(r, out);
}

struct CohomologyOptions {
  std::string mode = "total";
  int q = 0, max_p = 3, poly_degree = 2;
  std::string truncation = "weight";
};

int cmd_cohomology(const std::string& path, const CohomologyOptions& o, const Common& c, std::ostream& out) {
  Input in = load(path);
  Command cmd("cohomology", c);
  cmd.input(in);
  std::string kind = kind_of(in.json);
  if (o.max_p < 0 || o.q < 0 || o.poly_degree < 0) throw InputError("cohomology: degrees must be >= 0");
  RankResult res;
  if (kind == "algebroid") {
    AlgebroidPtr P = read_algebroid(in.json);
    Truncation t = P->dim() == 0 ? Truncation::none
                   : o.truncation == "degree" ? Truncation::degree
                                              : Truncation::weight;
    cmd["truncation"] = t == Truncation::none ? "none" : o.truncation;
    if (t != Truncation::none) cmd["poly_degree"] = o.poly_degree;
    if (o.mode == "total") {
      res = betti_total(P, o.max_p, o.poly_degree, t);
    } else {
      cmd["q"] = o.q;
      res = betti_row(P, o.q, o.max_p, o.poly_degree, t);
    }
  } else if (kind == "groupoid") {
    if (o.mode != "row") throw InputError("cohomology: groupoids support --mode row only");
    SplitGroupoid G = read_groupoid(in.json);
    cmd["q"] = o.q;
    cmd["poly_degree"] = o.poly_degree;
    res = bott_shulman_row_cohomology(G, o.q, o.max_p, o.poly_degree);
  } else {
    throw InputError("cohomology: expected kind algebroid or groupoid, got \"" + kind + "\"");
  }
  cmd["mode"] = o.mode;
  cmd["dims"] = array_of(res.dims);
  cmd["ranks"] = array_of(res.ranks);
  cmd["betti"] = array_of(res.betti);
  return cmd.finish(Report{}, out);
}

int cmd_vanest(const std::string& gpath, const std::string& fpath, int p, int q, const Common& c, std::ostream& out) {
  Input gin = load(gpath), fin = load(fpath);
  Command cmd("vanest", c);
  cmd.input(gin);
  cmd.input(fin);
  SplitGroupoid G = read_groupoid(gin.json);
  BSForm w = read_bs_form(fin.json, G);
  if (p >= 0 && p != w.level) throw InputError("vanest: --p does not match the form's level");
  if (!w.form.is_zero() && !w.form.is_homogeneous()) throw InputError("vanest: the form must be homogeneous");
  int deg = std::max(w.form.max_degree(), 0);
  if (q >= 0 && !w.form.is_zero() && q != deg) throw InputError("vanest: --q does not match the form's degree");
  cmd["level"] = w.level;
  cmd["degree"] = deg;
  Report r;
  bool normalized = true;
  for (int i = 0; i < w.level; ++i) {
    PolyForm s = pullback(nerve_degeneracy(G, w.level - 1, i), w.form);
    if (!s.is_zero()) {
      normalized = false;
      r.add("normalized: s_" + std::to_string(i) + "^*", false, s.to_string());
    }
  }
  if (normalized) {
    r.add("normalized", true);
    AlgebroidPtr P = lie_algebroid_of(G);
    EvalContext ctx(P);
    auto V = [&](const BSForm& x) { return x.form.is_zero() ? WeilElement(P) : vanest(G, ctx, x); };
    WeilElement v = V(w);
    cmd["element"] = v.to_string();
    WeilElement lhs = V(BSForm{w.level, ext_d(w.form)}), rhs = weil_dv(v);
    if (w.level % 2) rhs = -rhs;
    WeilElement dd = lhs - rhs;
    r.add("V(d w) = (-1)^p d^v V(w)", dd.is_zero(), dd.is_zero() ? "" : dd.to_string());
    WeilElement hh = V(bs_delta(G, w)) - weil_dh(v);
    r.add("V(delta w) = d^h V(w)", hh.is_zero(), hh.is_zero() ? "" : hh.to_string());
  }
  return cmd.finish(r, out);
}

PolyForm read_phi(const Json& j, const Algebroid& P) {
  if (!j.contains("phi")) return PolyForm(P.base());
  if (!j["phi"].is_string()) throw InputError("phi: expected a string");
  return form_at(j["phi"].get<std::string>(), P.base(), "phi");
}

int cmd_imcheck(const std::string& path, const Common& c, std::ostream& out) {
  Input in = load(path);
  Command cmd("imcheck", c);
  cmd.input(in);
  check_keys(in.json, {"kind", "algebroid", "tau", "phi"}, "im-data");
  check_kind(in.json, "im-data", true);
  AlgebroidPtr P = read_algebroid(need(in.json, "algebroid", "im-data"));
  FrameMap tau = read_frame_map(need(in.json, "tau", "im-data"), *P);
  PolyForm phi = read_phi(in.json, *P);
  Report r = int_pr_equivalence(P, tau, phi, c.seed, c.samples);
  cmd["sigma"] = cocycle_from_tau(P, tau, phi).to_string();
  return cmd.finish(r, out);
}

int cmd_transgression(const std::string& path, const Common& c, std::ostream& out) {
  Input in = load(path);
  Command cmd("transgression", c);
  cmd.input(in);
  check_keys(in.json, {"kind", "algebroid", "tau", "l"}, "transgression-data");
  check_kind(in.json, "transgression-data", true);
  AlgebroidPtr P = read_algebroid(need(in.json, "algebroid", "transgression-data"));
  FrameMap tau = read_frame_map(need(in.json, "tau", "transgression-data"), *P);
  FrameMap l = read_frame_map(need(in.json, "l", "transgression-data"), *P);
  Report r = check_transgression(P, l, tau, c.seed, c.samples);
  cmd["xi"] = xi_from_l(P, l, tau).to_string();
  return cmd.finish(r, out);
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr)) throw std::runtime_error("SHA-256 failed");
  std::ostringstream ss;
  for (unsigned i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return ss.str();
}

AlgebroidPtr read_algebroid(const Json& j) {
  check_keys(j, {"kind", "vars", "rank", "anchor", "structure"}, "algebroid");
  check_kind(j, "algebroid", false);
  Chart base(strings(need(j, "vars", "algebroid"), "vars"));
  int n = integer(need(j, "rank", "algebroid"), "rank");
  if (n < 0 || n > 64) throw InputError("rank: out of range");
  const Json& an = need(j, "anchor", "algebroid");
  if (!an.is_array() || an.size() != static_cast<std::size_t>(n)) throw InputError("anchor: expected one row per frame section");
  std::vector<std::vector<Poly>> anchor;
  for (std::size_t i = 0; i < an.size(); ++i)
    anchor.push_back(polys(an[i], base, base.size(), "anchor[" + std::to_string(i) + "]"));
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Poly>> structure;
  if (j.contains("structure")) {
    const Json& st = j["structure"];
    if (!st.is_object()) throw InputError("structure: expected an object");
    for (const auto& [key, col] : st.items()) {
      std::size_t jj = 0, kk = 0;
      char comma = 0;
      std::istringstream ks(key);
      if (!(ks >> jj >> comma >> kk) || comma != ',' || !ks.eof() || jj < 1 || kk < 1 || jj > static_cast<std::size_t>(n) ||
          kk > static_cast<std::size_t>(n) || jj == kk)
        throw InputError("structure: bad key \"" + key + "\" (expected \"j,k\" with 1 <= j != k <= rank)");
      auto v = polys(col, base, n, "structure[" + key + "]");
      if (jj > kk) {
        std::swap(jj, kk);
        for (auto& p : v) p = -p;
      }
      if (structure.count({jj - 1, kk - 1})) throw InputError("structure: pair \"" + key + "\" given twice");
      structure[{jj - 1, kk - 1}] = v;
    }
  }
  return std::make_shared<Algebroid>(base, n, anchor, structure);
}

SplitGroupoid read_groupoid(const Json& j) {
  check_keys(j, {"kind", "vars", "fiber_dim", "fiber_vars", "target", "unit", "mult", "inverse"}, "groupoid");
  check_kind(j, "groupoid", false);
  auto base = strings(need(j, "vars", "groupoid"), "vars");
  int d = integer(need(j, "fiber_dim", "groupoid"), "fiber_dim");
  if (d < 0) throw InputError("fiber_dim: must be >= 0");
  auto fiber = j.contains("fiber_vars") ? strings(j["fiber_vars"], "fiber_vars") : default_fiber_names(d);
  if (fiber.size() != static_cast<std::size_t>(d)) throw InputError("fiber_vars: expected fiber_dim names");
  try {
    return SplitGroupoid::parse(base, fiber, strings(need(j, "target", "groupoid"), "target"),
                                strings(need(j, "unit", "groupoid"), "unit"), strings(need(j, "mult", "groupoid"), "mult"),
                                strings(need(j, "inverse", "groupoid"), "inverse"));
  } catch (const ParseError& e) {
    throw InputError(std::string("groupoid: ") + e.what());
  }
}

FrameMap read_frame_map(const Json& j, const Algebroid& P) {
  check_keys(j, {"degree", "values"}, "frame map");
  FrameMap t;
  t.deg = integer(need(j, "degree", "frame map"), "degree");
  auto vals = strings(need(j, "values", "frame map"), "values");
  if (vals.size() != P.rank()) throw InputError("values: expected one form per frame section");
  for (std::size_t i = 0; i < vals.size(); ++i) {
    PolyForm w = form_at(vals[i], P.base(), "values[" + std::to_string(i) + "]");
    if (!w.is_zero() && (!w.is_homogeneous() || w.max_degree() != t.deg))
      throw InputError("values[" + std::to_string(i) + "]: not a form of degree " + std::to_string(t.deg));
    t.values.push_back(w);
  }
  return t;
}

BSForm read_bs_form(const Json& j, const SplitGroupoid& G) {
  check_keys(j, {"kind", "level", "form"}, "bs-form");
  check_kind(j, "bs-form", false);
  int p = integer(need(j, "level", "bs-form"), "level");
  if (p < 0 || p > 4) throw InputError("level: expected 0..4");
  const Json& f = need(j, "form", "bs-form");
  if (!f.is_string()) throw InputError("form: expected a string");
  return BSForm{p, form_at(f.get<std::string>(), G.nerve_chart(p), "form")};
}

}  // namespace weil::cli

namespace weil::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks for Weil algebras of Lie algebroids, Bott-Shulman complexes and the Van Est map"};
  app.name("weilcheck");
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Seed for randomized checks")->default_val(0);
    sub->add_option("--samples", common.samples, "Random samples per check")->default_val(20);
    sub->add_flag("--timings", common.timings, "Add wall-clock timings to the report");
  };

  std::string path, form_path;
  auto* check = app.add_subcommand("check", "Certify an algebroid or groupoid definition");
  check->add_option("file", path, "Definition file")->required();
  add_common(check);

  CohomologyOptions co;
  auto* coh = app.add_subcommand("cohomology", "Betti numbers of a finite slice");
  coh->add_option("file", path, "Definition file")->required();
  coh->add_option("--mode", co.mode, "total or row")->check(CLI::IsMember({"total", "row"}));
  coh->add_option("--q", co.q, "Row index q");
  coh->add_option("--max-p", co.max_p, "Highest degree");
  coh->add_option("--poly-degree", co.poly_degree, "Truncation bound D");
  coh->add_option("--truncation", co.truncation, "weight or degree")->check(CLI::IsMember({"weight", "degree"}));
  add_common(coh);

  int vp = -1, vq = -1;
  auto* ve = app.add_subcommand("vanest", "Van Est image of a normalized Bott-Shulman form");
  ve->add_option("groupoid", path, "Groupoid definition")->required();
  ve->add_option("form", form_path, "bs-form file")->required();
  ve->add_option("--p", vp, "Expected level");
  ve->add_option("--q", vq, "Expected form degree");
  add_common(ve);

  auto* im = app.add_subcommand("imcheck", "IM-form equations and the cocycle route");
  im->add_option("file", path, "im-data file")->required();
  add_common(im);

  auto* tr = app.add_subcommand("transgression", "Transgression equations and the xi-cocycle route");
  tr->add_option("file", path, "transgression-data file")->required();
  add_common(tr);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(path, common, out);
    if (coh->parsed()) return cmd_cohomology(path, co, common, out);
    if (ve->parsed()) return cmd_vanest(path, form_path, vp, vq, common, out);
    if (im->parsed()) return cmd_imcheck(path, common, out);
    if (tr->parsed()) return cmd_transgression(path, common, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const TruncationError& e) {
    err << "error: truncation violated: " << e.what() << "\n";
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace weil::cli
