#include <algorithm>
#include <sstream>

#include "cli.hpp"
#include "obsfn/error.hpp"

namespace obsfn::cli {

Tolerances RunConfig::tol() const {
  Tolerances t;
  for (const auto& kv : tol_overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("--tol expects KEY=VAL, got " + kv);
    const std::string key = kv.substr(0, eq);
    double v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      throw InputError("--tol value is not a number: " + kv);
    }
    if (!(v > 0)) throw InputError("--tol values must be positive: " + kv);
    if (key == "sym") t.sym = v;
    else if (key == "proj") t.proj = v;
    else if (key == "rec") t.rec = v;
    else if (key == "sub") t.sub = v;
    else if (key == "cluster") t.cluster = v;
    else if (key == "pivot") t.pivot = v;
    else if (key == "offdiag") t.offdiag = v;
    else if (key == "max_sweeps") t.max_sweeps = static_cast<int>(v);
    else throw InputError("unknown tolerance " + key);
  }
  return t;
}

io::LoadOptions RunConfig::load() const {
  io::LoadOptions o;
  o.lattice.element_cap = cap;
  o.ideal_cap = cap;
  o.tol = tol();
  return o;
}

io::fs::path input(const std::string& ref) {
  if (ref.empty()) throw InputError("missing input file");
  return io::resolve(ref, io::fs::path());
}

std::string num(double x) { return nlohmann::json(x).dump(); }

namespace {

bool scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_string(); })) {
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].get<std::string>();
    return out + "}";
  }
  return v.dump();
}

bool flat_rows(const Json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& row : v) {
    if (!row.is_object()) return false;
    for (const auto& [k, x] : row.items())
      if (x.is_object()) return false;
  }
  return true;
}

void table(const Json& rows, const std::string& pad, std::ostringstream& out) {
  std::vector<std::string> keys;
  for (const auto& [k, x] : rows[0].items()) keys.push_back(k);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width;
  for (const auto& k : keys) width.push_back(k.size());
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < keys.size(); ++c) {
      line.push_back(row.contains(keys[c]) ? cell(row.at(keys[c])) : "");
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto put = [&](const std::vector<std::string>& line) {
    std::string s = pad;
    for (std::size_t c = 0; c < line.size(); ++c) {
      s += line[c];
      if (c + 1 < line.size()) s += std::string(width[c] - line[c].size() + 2, ' ');
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out << s << "\n";
  };
  put(keys);
  for (const auto& line : cells) put(line);
}

void render(const Json& j, const std::string& pad, std::ostringstream& out) {
  for (const auto& [k, v] : j.items()) {
    if (k == "witness" || scalar(v)) {
      out << pad << k << ": " << (scalar(v) ? cell(v) : v.dump()) << "\n";
    } else if (v.is_array() && std::all_of(v.begin(), v.end(), scalar)) {
      out << pad << k << ":";
      for (const auto& e : v) out << " " << cell(e);
      out << "\n";
    } else if (flat_rows(v)) {
      out << pad << k << ":\n";
      table(v, pad + "  ", out);
    } else if (v.is_object()) {
      out << pad << k << ":\n";
      render(v, pad + "  ", out);
    } else {
      out << pad << k << ": " << v.dump() << "\n";
    }
  }
}

}  // namespace

std::string render_text(const Json& j) {
  std::ostringstream out;
  render(j, "", out);
  return out.str();
}

}  // namespace obsfn::cli
