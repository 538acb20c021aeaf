#include "obsfn/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "obsfn/error.hpp"

namespace obsfn::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

fs::path g_fallback;

template <typename J>
J parse_json(const std::string& text, const std::string& where) {
  try {
    return J::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(where + ": " + e.what());
  }
}

json load_json(const fs::path& p) { return parse_json<json>(read_text(p), p.string()); }

// Runs `f`, turning JSON type errors into InputError tagged with `where`.
template <typename F>
auto guarded(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

cplx parse_entry(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw InputError("matrix entry must be a number or [re, im], got " + e.dump());
}

CMatrix matrix_from(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw InputError("matrix rows must be nonempty arrays");
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InputError("matrix rows differ in length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = parse_entry(j[i][k]);
  }
  return m;
}

json entry_json(cplx z) {
  auto clean = [](double x) { return x == 0.0 ? 0.0 : x; };
  return json::array({clean(z.real()), clean(z.imag())});
}

CMatrix matrix_ref(const json& j, const fs::path& base) {
  if (j.is_string()) return load_matrix(resolve(j.get<std::string>(), base));
  return matrix_from(j);
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of names");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw InputError(where + ": expected a name, got " + e.dump());
    out.push_back(e.get<std::string>());
  }
  return out;
}

PointSet point_set(const FiniteTopSpace& s, const json& j, const std::string& where) {
  PointSet out;
  for (const auto& n : string_list(j, where)) out.insert(s.point(n));
  return out;
}

}  // namespace

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void set_corpus_fallback(fs::path dir) { g_fallback = std::move(dir); }

std::vector<fs::path> corpus_dirs() {
  fs::path root = g_fallback;
  if (const char* env = std::getenv("OBS_CORPUS_DIR"); env != nullptr && *env != '\0') root = env;
  std::vector<fs::path> out;
  std::error_code ec;
  if (root.empty() || !fs::is_directory(root, ec)) return out;
  out.push_back(root);
  std::vector<fs::path> subs;
  for (const auto& e : fs::directory_iterator(root, ec))
    if (e.is_directory()) subs.push_back(e.path());
  std::sort(subs.begin(), subs.end());
  out.insert(out.end(), subs.begin(), subs.end());
  return out;
}

fs::path resolve(const std::string& ref, const fs::path& base) {
  fs::path r(ref);
  std::error_code ec;
  if (r.is_absolute()) return r;
  if (fs::exists(base / r, ec)) return base / r;
  for (const auto& d : corpus_dirs())
    if (fs::exists(d / r, ec)) return d / r;
  throw InputError("cannot find " + ref + " (looked in " + (base.empty() ? "." : base.string()) +
                   " and the corpus)");
}

std::string reference(const fs::path& p, const std::string& key) {
  auto j = load_json(p);
  return guarded(p.string(), [&] { return field(j, key.c_str(), p.string()).get<std::string>(); });
}

// ---- lattices -------------------------------------------------------------

LatticePtr parse_lattice(const std::string& text, const LoadOptions& opt) {
  auto j = parse_json<json>(text, "lattice");
  return guarded("lattice", [&] {
    auto names = string_list(field(j, "elements", "lattice"), "elements");
    std::vector<std::pair<std::string, std::string>> leq, ortho;
    for (const auto& p : field(j, "leq", "lattice")) {
      if (!p.is_array() || p.size() != 2) throw InputError("lattice: leq entries are [a, b] pairs");
      leq.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    if (j.contains("ortho")) {
      const auto& o = j.at("ortho");
      if (!o.is_object()) throw InputError("lattice: ortho must be an object");
      for (const auto& [k, v] : o.items()) ortho.emplace_back(k, v.get<std::string>());
    }
    return Lattice::from_named_order(std::move(names), leq, ortho, opt.lattice);
  });
}

LatticePtr load_lattice(const fs::path& p, const LoadOptions& opt) {
  try {
    return parse_lattice(read_text(p), opt);
  } catch (const InputError& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

std::string lattice_json(const Lattice& l) {
  ordered_json j;
  j["elements"] = l.names();
  ordered_json leq = ordered_json::array();
  for (auto [a, b] : l.covers()) leq.push_back({l.name(a), l.name(b)});
  j["leq"] = leq;
  if (l.has_ortho()) {
    ordered_json o = ordered_json::object();
    for (ElementId a = 0; a < l.size(); ++a) {
      ElementId b = l.ortho(a);
      if (b < a) continue;
      o[l.name(a)] = l.name(b);
    }
    j["ortho"] = o;
  }
  return j.dump();
}

// ---- spectral families ----------------------------------------------------

LoadedFamily load_family(const fs::path& p, const LoadOptions& opt) {
  auto j = load_json(p);
  const std::string where = p.string();
  return guarded(where, [&] {
    auto ref = field(j, "lattice", where).get<std::string>();
    auto l = load_lattice(resolve(ref, p.parent_path()), opt);
    std::vector<Breakpoint> bps;
    for (const auto& b : field(j, "breakpoints", where)) {
      if (!b.is_array() || b.size() != 2) throw InputError(where + ": breakpoints are [lambda, element]");
      bps.push_back({b[0].get<double>(), l->id(b[1].get<std::string>())});
    }
    ElementId top = j.contains("top") ? l->id(j.at("top").get<std::string>()) : l->one();
    return LoadedFamily{ref, SpectralFamily(l, top, bps)};
  });
}

std::string family_json(const SpectralFamily& e, const std::string& lattice_ref) {
  ordered_json j;
  j["lattice"] = lattice_ref;
  ordered_json bps = ordered_json::array();
  for (const auto& b : e.breakpoints()) bps.push_back({b.lambda, e.lattice().name(b.value)});
  j["breakpoints"] = bps;
  if (e.top() != e.lattice().one()) j["top"] = e.lattice().name(e.top());
  return j.dump();
}

// ---- observable tables ----------------------------------------------------

ObservableFunction load_table(const fs::path& p, const LoadOptions& opt) {
  auto j = load_json(p);
  const std::string where = p.string();
  return guarded(where, [&] {
    auto l = load_lattice(resolve(field(j, "lattice", where).get<std::string>(), p.parent_path()), opt);
    auto space = std::make_shared<const StoneSpectrum>(l, opt.ideal_cap);
    const auto& vals = field(j, "values", where);
    if (!vals.is_object()) throw InputError(where + ": values must be an object");
    const double unset = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> table(space->dual_ideals().size(), unset);
    for (const auto& [key, v] : vals.items()) {
      auto idx = space->index_of(parse_ideal(*l, key));
      if (!std::isnan(table[idx])) throw InputError(where + ": ideal " + key + " given twice");
      table[idx] = v.get<double>();
    }
    for (std::size_t i = 0; i < table.size(); ++i)
      if (std::isnan(table[i]))
        throw InputError(where + ": no value for ideal " + ideal_key(*l, space->ideal(i)));
    return ObservableFunction(space, std::move(table));
  });
}

std::string table_json(const ObservableFunction& f, const std::string& lattice_ref) {
  ordered_json j;
  j["lattice"] = lattice_ref;
  ordered_json v = ordered_json::object();
  for (std::size_t i = 0; i < f.values().size(); ++i)
    v[ideal_key(f.lattice(), f.space().ideal(i))] = f.at(i);
  j["values"] = v;
  return j.dump();
}

// ---- matrices -------------------------------------------------------------

CMatrix parse_matrix(const std::string& text) {
  auto j = parse_json<json>(text, "matrix");
  return guarded("matrix", [&] { return matrix_from(j); });
}

CMatrix load_matrix(const fs::path& p) {
  try {
    return parse_matrix(read_text(p));
  } catch (const InputError& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

std::string matrix_json(const CMatrix& m) {
  json j = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(entry_json(m(i, k)));
    j.push_back(row);
  }
  return j.dump();
}

std::vector<CMatrix> load_generators(const fs::path& p) {
  auto j = load_json(p);
  const std::string where = p.string();
  return guarded(where, [&] {
    std::vector<CMatrix> out;
    for (const auto& g : field(j, "generators", where)) out.push_back(matrix_ref(g, p.parent_path()));
    return out;
  });
}

// ---- topologies -----------------------------------------------------------

FiniteTopSpace load_space(const fs::path& p) {
  auto j = load_json(p);
  const std::string where = p.string();
  return guarded(where, [&] {
    auto points = string_list(field(j, "points", where), "points");
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!idx.emplace(points[i], i).second) throw InputError(where + ": duplicate point " + points[i]);
    }
    std::vector<PointSet> opens;
    for (const auto& o : field(j, "opens", where)) {
      PointSet s;
      for (const auto& n : string_list(o, "opens")) {
        auto it = idx.find(n);
        if (it == idx.end()) throw InputError(where + ": unknown point " + n);
        s.insert(it->second);
      }
      opens.push_back(s);
    }
    return FiniteTopSpace::from_opens(std::move(points), opens);
  });
}

std::string space_json(const FiniteTopSpace& s) {
  ordered_json j;
  j["points"] = s.point_names();
  ordered_json opens = ordered_json::array();
  for (auto o : s.opens(1u << 16)) {
    ordered_json names = ordered_json::array();
    o.for_each([&](std::size_t x) { names.push_back(s.name(x)); });
    opens.push_back(names);
  }
  j["opens"] = opens;
  return j.dump();
}

namespace {

FiniteTopSpace space_of(const json& j, const fs::path& p, const FiniteTopSpace* given) {
  if (given != nullptr) return *given;
  return load_space(resolve(field(j, "space", p.string()).get<std::string>(), p.parent_path()));
}

}  // namespace

LoadedFunction load_function(const fs::path& p, const FiniteTopSpace* given) {
  auto j = load_json(p);
  const std::string where = p.string();
  return guarded(where, [&] {
    auto space = space_of(j, p, given);
    const auto& vals = field(j, "values", where);
    std::vector<double> f(space.size(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& [k, v] : vals.items()) f[space.point(k)] = v.get<double>();
    for (std::size_t x = 0; x < f.size(); ++x)
      if (std::isnan(f[x])) throw InputError(where + ": no value for point " + space.name(x));
    return LoadedFunction{std::move(space), std::move(f)};
  });
}

TopSpectralFamily load_top_family(const fs::path& p, const FiniteTopSpace* given) {
  auto j = load_json(p);
  const std::string where = p.string();
  return guarded(where, [&] {
    auto space = space_of(j, p, given);
    PointSet base = j.contains("base") ? point_set(space, j.at("base"), "base") : PointSet{};
    std::vector<TopBreakpoint> bps;
    for (const auto& b : field(j, "breakpoints", where)) {
      if (!b.is_array() || b.size() != 2) throw InputError(where + ": breakpoints are [lambda, [points]]");
      bps.push_back({b[0].get<double>(), point_set(space, b[1], "breakpoint value")});
    }
    bool unbounded = j.value("unbounded", false);
    return TopSpectralFamily(space, base, bps, unbounded);
  });
}

// ---- contexts -------------------------------------------------------------

ContextDiagram load_diagram(const fs::path& p, const LoadOptions& opt) {
  auto j = parse_json<ordered_json>(read_text(p), p.string());
  const std::string where = p.string();
  try {
    if (!j.contains("ambient_dim") || !j.contains("contexts"))
      throw InputError(where + ": needs \"ambient_dim\" and \"contexts\"");
    auto dim = j.at("ambient_dim").get<std::size_t>();
    std::vector<std::pair<std::string, std::vector<CMatrix>>> ctx;
    for (const auto& [name, gens] : j.at("contexts").items()) {
      std::vector<CMatrix> ms;
      for (const auto& g : gens) ms.push_back(matrix_ref(json::parse(g.dump()), p.parent_path()));
      for (const auto& m : ms)
        if (m.rows() != dim || m.cols() != dim)
          throw InputError(where + ": context " + name + " has a generator of the wrong size");
      ctx.emplace_back(name, std::move(ms));
    }
    return ContextDiagram::build(dim, ctx, opt.tol);
  } catch (const ordered_json::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

GlobalSection load_sections(const fs::path& p, const ContextDiagram& d) {
  auto j = load_json(p);
  const std::string where = p.string();
  return guarded(where, [&] {
    GlobalSection s;
    s.tables.resize(d.contexts().size());
    for (const auto& [name, entries] : field(j, "contexts", where).items()) {
      const std::size_t ci = d.index(name);
      const Context& c = d.context(ci);
      const double unset = std::numeric_limits<double>::quiet_NaN();
      std::vector<double> t(std::size_t{1} << c.atoms(), unset);
      for (const auto& e : entries) {
        CMatrix proj;
        if (e.contains("proj")) {
          proj = matrix_ref(e.at("proj"), p.parent_path());
        } else if (e.contains("vector")) {
          std::vector<cplx> v;
          for (const auto& x : e.at("vector")) v.push_back(parse_entry(x));
          double n = norm(v);
          if (n == 0) throw InputError(where + ": zero vector in context " + name);
          for (auto& x : v) x /= n;
          proj = CMatrix::outer(v);
        } else {
          throw InputError(where + ": entries need \"proj\" or \"vector\"");
        }
        auto mask = c.find(proj, d.tolerances());
        if (!mask || *mask == 0)
          throw InputError(where + ": a projection listed under " + name + " is not a nonzero projection of it");
        t[*mask] = field(e, "value", where).get<double>();
      }
      for (std::uint64_t m = 1; m < t.size(); ++m) {
        if (!std::isnan(t[m])) continue;
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < c.atoms(); ++k) {
          if (((m >> k) & 1U) == 0) continue;
          double v = t[std::uint64_t{1} << k];
          if (std::isnan(v))
            throw InputError(where + ": context " + name + " lacks a value for a minimal projection");
          mx = std::max(mx, v);
        }
        t[m] = mx;
      }
      t[0] = unset;
      s.tables[ci] = std::move(t);
    }
    fill_restrictions(s, d);
    return s;
  });
}

// ---- presheaves -----------------------------------------------------------

FinitePresheaf load_presheaf(const fs::path& p, const LoadOptions& opt) {
  auto j = load_json(p);
  const std::string where = p.string();
  return guarded(where, [&] {
    const auto kind = field(j, "kind", where).get<std::string>();
    const fs::path base = p.parent_path();
    if (kind == "function") {
      auto space = load_space(resolve(field(j, "space", where).get<std::string>(), base));
      return function_presheaf(space, string_list(field(j, "values", where), "values"));
    }
    auto l = load_lattice(resolve(field(j, "lattice", where).get<std::string>(), base), opt);
    if (kind == "spectral") {
      std::vector<double> lambdas{1.0, 2.0};
      if (j.contains("lambdas")) lambdas = j.at("lambdas").get<std::vector<double>>();
      return spectral_presheaf(l, lambdas);
    }
    if (kind == "constant") return constant_presheaf(l, string_list(field(j, "values", where), "values"));
    if (kind == "explicit") {
      FinitePresheaf s(l);
      for (const auto& [name, labels] : field(j, "sets", where).items())
        s.set_values(l->id(name), string_list(labels, "sets"));
      for (const auto& r : field(j, "restrictions", where)) {
        if (!r.is_array() || r.size() != 3)
          throw InputError(where + ": restrictions are [a, b, map] with a <= b");
        s.set_restriction(l->id(r[0].get<std::string>()), l->id(r[1].get<std::string>()),
                          r[2].get<std::vector<std::size_t>>());
      }
      s.validate();
      return s;
    }
    throw InputError(where + ": unknown presheaf kind " + kind);
  });
}

}  // namespace obsfn::io
