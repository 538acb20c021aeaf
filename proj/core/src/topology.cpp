#include "obsfn/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "obsfn/error.hpp"

namespace obsfn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_names(const std::vector<std::string>& points) {
  if (points.size() > ElementSet::kCapacity) throw ResourceError("topological space has more than 64 points");
  std::set<std::string> seen;
  for (const auto& p : points) {
    if (p.empty()) throw InputError("empty point name");
    if (!seen.insert(p).second) throw InputError("duplicate point name: " + p);
  }
}

}  // namespace

FiniteTopSpace FiniteTopSpace::from_opens(std::vector<std::string> points, const std::vector<PointSet>& opens) {
  check_names(points);
  const PointSet all = PointSet::first_n(points.size());
  std::set<std::uint64_t> family;
  for (auto u : opens) {
    if (!u.is_subset_of(all)) throw InputError("open set contains an unknown point");
    family.insert(u.bits());
  }
  if (!family.count(0)) throw InputError("topology must contain the empty set");
  if (!family.count(all.bits())) throw InputError("topology must contain the whole space");
  for (auto a : family) {
    for (auto b : family) {
      if (!family.count(a | b) || !family.count(a & b)) {
        throw InputError("open sets are not closed under union and intersection");
      }
    }
  }
  FiniteTopSpace s;
  s.points_ = std::move(points);
  s.nbhd_.assign(s.points_.size(), all);
  for (auto u : family) {
    PointSet us(u);
    us.for_each([&](ElementId x) { s.nbhd_[x] &= us; });
  }
  return s;
}

FiniteTopSpace FiniteTopSpace::from_neighbourhoods(std::vector<std::string> points, std::vector<PointSet> nbhd) {
  check_names(points);
  if (nbhd.size() != points.size()) throw InputError("one neighbourhood per point is required");
  const PointSet all = PointSet::first_n(points.size());
  for (std::size_t x = 0; x < nbhd.size(); ++x) {
    if (!nbhd[x].contains(x) || !nbhd[x].is_subset_of(all)) {
      throw InputError("minimal neighbourhood of " + points[x] + " is invalid");
    }
    nbhd[x].for_each([&](ElementId y) {
      if (!nbhd[y].is_subset_of(nbhd[x])) {
        throw InputError("neighbourhoods are not transitive at " + points[x]);
      }
    });
  }
  FiniteTopSpace s;
  s.points_ = std::move(points);
  s.nbhd_ = std::move(nbhd);
  return s;
}

std::vector<FiniteTopSpace> FiniteTopSpace::all_topologies(std::size_t n) {
  if (n > 4) throw ResourceError("topology enumeration is limited to 4 points");
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back(std::to_string(i));
  std::vector<std::pair<std::size_t, std::size_t>> off;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) off.emplace_back(i, j);
  std::vector<FiniteTopSpace> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << off.size()); ++m) {
    std::vector<PointSet> nb(n);
    for (std::size_t i = 0; i < n; ++i) nb[i].insert(i);
    for (std::size_t k = 0; k < off.size(); ++k)
      if ((m >> k) & 1U) nb[off[k].first].insert(off[k].second);
    bool transitive = true;
    for (std::size_t x = 0; x < n && transitive; ++x) {
      nb[x].for_each([&](ElementId y) {
        if (!nb[y].is_subset_of(nb[x])) transitive = false;
      });
    }
    if (transitive) out.push_back(from_neighbourhoods(names, nb));
  }
  return out;
}

std::size_t FiniteTopSpace::point(const std::string& name) const {
  auto it = std::find(points_.begin(), points_.end(), name);
  if (it == points_.end()) throw InputError("unknown point: " + name);
  return static_cast<std::size_t>(it - points_.begin());
}

bool FiniteTopSpace::is_open(PointSet s) const { return interior(s) == s; }

PointSet FiniteTopSpace::interior(PointSet s) const {
  PointSet out;
  s.for_each([&](ElementId x) {
    if (nbhd_[x].is_subset_of(s)) out.insert(x);
  });
  return out;
}

PointSet FiniteTopSpace::closure(PointSet s) const {
  PointSet out;
  for (std::size_t x = 0; x < size(); ++x)
    if (!(nbhd_[x] & s).empty()) out.insert(x);
  return out;
}

PointSet FiniteTopSpace::interior_in(PointSet sub, PointSet s) const {
  PointSet out;
  (s & sub).for_each([&](ElementId x) {
    if ((nbhd_[x] & sub).is_subset_of(s)) out.insert(x);
  });
  return out;
}

std::vector<PointSet> FiniteTopSpace::opens(std::size_t cap) const {
  std::set<std::uint64_t> family{0};
  for (const auto& n : nbhd_) {
    std::vector<std::uint64_t> add;
    for (auto u : family) add.push_back(u | n.bits());
    family.insert(add.begin(), add.end());
    if (family.size() > cap) throw ResourceError("topology has more than " + std::to_string(cap) + " open sets");
  }
  std::vector<PointSet> out;
  for (auto u : family) out.emplace_back(u);
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

LatticePtr FiniteTopSpace::open_set_lattice() const {
  auto us = opens(ElementSet::kCapacity);
  std::vector<std::string> names;
  for (auto u : us) names.push_back(format(u));
  std::vector<std::pair<ElementId, ElementId>> order;
  for (std::size_t i = 0; i < us.size(); ++i)
    for (std::size_t j = 0; j < us.size(); ++j)
      if (i != j && us[i].is_subset_of(us[j])) order.emplace_back(i, j);
  return Lattice::from_order(std::move(names), order);
}

std::string FiniteTopSpace::format(PointSet s) const {
  std::string out = "{";
  bool first = true;
  s.for_each([&](ElementId x) {
    if (!first) out += ",";
    out += points_.at(x);
    first = false;
  });
  return out + "}";
}

std::string FiniteTopSpace::to_dot() const {
  std::ostringstream os;
  os << "digraph specialization {\n";
  for (std::size_t x = 0; x < size(); ++x) os << "  \"" << points_[x] << "\";\n";
  for (std::size_t x = 0; x < size(); ++x) {
    nbhd_[x].for_each([&](ElementId y) {
      if (y == x) return;
      // cover edges only
      bool cover = true;
      nbhd_[x].for_each([&](ElementId z) {
        if (z != x && z != y && nbhd_[z].contains(y) && !nbhd_[z].contains(x)) cover = false;
      });
      if (cover) os << "  \"" << points_[x] << "\" -> \"" << points_[y] << "\";\n";
    });
  }
  os << "}\n";
  return os.str();
}

// ---- grid -------------------------------------------------------------------

CellGrid CellGrid::make(double x0, double x1, double step) {
  if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(step) || step <= 0 || x1 <= x0) {
    throw InputError("grid needs finite x0 < x1 and step > 0");
  }
  double n = (x1 - x0) / step;
  auto intervals = static_cast<std::size_t>(std::llround(n));
  if (std::abs(n - static_cast<double>(intervals)) > 1e-9 * std::max(1.0, n)) {
    throw InputError("grid step does not divide the interval");
  }
  if (intervals == 0 || intervals > 31) throw ResourceError("grid must have between 1 and 31 intervals");
  CellGrid g;
  g.x0 = x0;
  g.step = step;
  g.intervals = intervals;
  std::vector<std::string> names;
  std::vector<PointSet> nb;
  for (std::size_t j = 0; j <= intervals; ++j) {
    std::ostringstream v;
    v << g.grid_point(j);
    names.push_back(v.str());
    PointSet n = PointSet::singleton(2 * j);
    if (j > 0) n.insert(2 * j - 1);
    if (j < intervals) n.insert(2 * j + 1);
    nb.push_back(n);
    if (j < intervals) {
      std::ostringstream e;
      e << "(" << g.grid_point(j) << "," << g.grid_point(j + 1) << ")";
      names.push_back(e.str());
      nb.push_back(PointSet::singleton(2 * j + 1));
    }
  }
  g.space = FiniteTopSpace::from_neighbourhoods(std::move(names), std::move(nb));
  return g;
}

CellGrid CellGrid::parse(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw InputError("bad number");
    } catch (const std::exception&) {
      throw InputError("grid must be x0:x1:step, got " + spec);
    }
  }
  if (parts.size() != 3) throw InputError("grid must be x0:x1:step, got " + spec);
  return make(parts[0], parts[1], parts[2]);
}

// ---- families ---------------------------------------------------------------

TopSpectralFamily::TopSpectralFamily(const FiniteTopSpace& space, PointSet base,
                                     const std::vector<TopBreakpoint>& bps, bool unbounded_above)
    : space_(space), base_(base), unbounded_(unbounded_above) {
  if (!space_.is_open(base)) throw InputError("base value is not open");
  PointSet prev = base;
  double prev_l = -kInf;
  for (const auto& b : bps) {
    if (!std::isfinite(b.lambda)) throw InputError("breakpoints must be finite");
    if (b.lambda <= prev_l) throw InputError("breakpoints must be strictly increasing");
    if (!space_.is_open(b.value)) throw InputError("family value " + space_.format(b.value) + " is not open");
    if (!prev.is_subset_of(b.value)) throw InputError("family values must increase");
    prev_l = b.lambda;
    if (b.value == prev) continue;
    bps_.push_back(b);
    prev = b.value;
  }
  if (!unbounded_ && prev != space_.all()) {
    throw InputError("bounded family must reach the whole space (flag it unbounded otherwise)");
  }
}

PointSet TopSpectralFamily::eval(double lambda) const {
  PointSet v = base_;
  for (const auto& b : bps_) {
    if (b.lambda > lambda) break;
    v = b.value;
  }
  return v;
}

double TopSpectralFamily::induced_function(std::size_t x) const {
  if (x >= space_.size()) throw InputError("point out of range");
  if (base_.contains(x)) throw DomainError("point " + space_.name(x) + " is outside the admissible domain");
  for (const auto& b : bps_)
    if (b.value.contains(x)) return b.lambda;
  throw DomainError("point " + space_.name(x) + " never enters the family");
}

std::set<double> TopSpectralFamily::spectrum() const {
  std::set<double> s;
  for (const auto& b : bps_) s.insert(b.lambda);
  return s;
}

TopSpectralFamily sigma_from_function(const FiniteTopSpace& space, const std::vector<double>& f) {
  if (f.size() != space.size()) throw InputError("function needs one value per point");
  std::set<double> vals;
  for (double v : f) {
    if (!std::isfinite(v)) throw InputError("function values must be finite");
    vals.insert(v);
  }
  std::vector<TopBreakpoint> bps;
  for (double l : vals) {
    PointSet pre;
    for (std::size_t x = 0; x < f.size(); ++x)
      if (f[x] <= l) pre.insert(x);
    bps.push_back({l, space.interior(pre)});
  }
  // the interior of the whole space is the whole space, so the family is bounded
  return TopSpectralFamily(space, PointSet{}, bps);
}

bool is_continuous_function(const FiniteTopSpace& space, const std::vector<double>& f) {
  if (f.size() != space.size()) throw InputError("function needs one value per point");
  for (std::size_t x = 0; x < f.size(); ++x) {
    bool ok = true;
    space.minimal_neighbourhood(x).for_each([&](ElementId y) {
      if (f[y] != f[x]) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

ContinuityReport is_continuous_family(const TopSpectralFamily& s, double resolution) {
  if (!(resolution >= 0)) throw InputError("resolution must be nonnegative");
  const auto& sp = s.space();
  ContinuityReport rep;
  const auto& bps = s.breakpoints();
  // closure(sigma(l)) subset sigma(m) for l < m with m - l >= resolution.
  // sigma is piecewise constant, so l ranges over breakpoints (and -inf) and
  // the worst m is the smallest admissible one.
  std::vector<std::pair<double, PointSet>> steps;
  steps.emplace_back(-kInf, s.base());
  for (const auto& b : bps) steps.emplace_back(b.lambda, b.value);
  const double eps = resolution * (1 + 1e-9);
  for (std::size_t i = 0; i < steps.size() && rep.continuous; ++i) {
    double l = steps[i].first;
    PointSet cl = sp.closure(steps[i].second);
    double m;
    if (std::isinf(l)) {
      m = bps.empty() ? 0.0 : bps.front().lambda - 1.0;
      l = m - std::max(resolution, 1.0);
    } else if (resolution == 0) {
      double next = i + 1 < steps.size() ? steps[i + 1].first : l + 1.0;
      m = l + (next - l) / 2;
    } else {
      m = l + eps;
    }
    if (!cl.is_subset_of(s.eval(m))) {
      rep.continuous = false;
      rep.witness = std::make_pair(l, m);
    }
  }
  rep.domain_open = sp.is_open(s.admissible_domain());
  rep.domain_dense = sp.closure(s.admissible_domain()) == sp.all();
  for (const auto& b : bps)
    if (!sp.is_regular_open(b.value)) rep.values_regular_open = false;
  if (!sp.is_regular_open(s.base())) rep.values_regular_open = false;
  return rep;
}

SpectrumReport spectrum_and_resolvent(const TopSpectralFamily& s) {
  SpectrumReport r;
  r.spectrum = s.spectrum();
  double lo = -kInf;
  for (double l : r.spectrum) {
    r.resolvent.emplace_back(lo, l);
    lo = l;
  }
  r.resolvent.emplace_back(lo, kInf);
  s.admissible_domain().for_each([&](ElementId x) {
    try {
      r.image_closure.insert(s.induced_function(x));
    } catch (const DomainError&) {
    }
  });
  r.equal = r.image_closure == r.spectrum;
  return r;
}

// ---- example families ---------------------------------------------------------

double grid_target(const std::string& name, double x) {
  if (name == "id") return x;
  if (name == "abs") return std::abs(x);
  if (name == "ln") return x == 0 ? -kInf : std::log(std::abs(x));
  if (name == "step") return std::floor(x);
  throw InputError("unknown family: " + name + " (expected id, abs, ln or step)");
}

namespace {

// infimum of the target over the open interval (a, b)
double open_cell_inf(const std::string& name, double a, double b) {
  if (name == "id") return a;
  if (name == "step") return std::floor(a);
  double d = (a < 0 && b > 0) ? 0.0 : std::min(std::abs(a), std::abs(b));
  if (name == "abs") return d;
  return d == 0 ? -kInf : std::log(d);
}

TopSpectralFamily family_from_entries(const CellGrid& g, const std::vector<double>& entry) {
  PointSet base;
  std::set<double> vals;
  for (std::size_t c = 0; c < entry.size(); ++c) {
    if (entry[c] == -kInf) base.insert(c);
    else vals.insert(entry[c]);
  }
  std::vector<TopBreakpoint> bps;
  for (double l : vals) {
    PointSet v;
    for (std::size_t c = 0; c < entry.size(); ++c)
      if (entry[c] <= l) v.insert(c);
    bps.push_back({l, v});
  }
  return TopSpectralFamily(g.space, base, bps);
}

}  // namespace

TopSpectralFamily grid_family(const CellGrid& g, const std::string& name) {
  grid_target(name, 0.0);  // validates the name
  std::vector<double> entry(g.space.size());
  for (std::size_t j = 0; j < g.vertices(); ++j) {
    entry[g.vertex(j)] = grid_target(name, g.grid_point(j));
    if (j < g.intervals) entry[g.edge(j)] = open_cell_inf(name, g.grid_point(j), g.grid_point(j + 1));
  }
  return family_from_entries(g, entry);
}

GridFunction sample_induced(const CellGrid& g, const TopSpectralFamily& s) {
  GridFunction out;
  for (std::size_t j = 0; j < g.vertices(); ++j) {
    if (s.base().contains(g.vertex(j))) continue;
    out.points.push_back(g.grid_point(j));
    out.values.push_back(s.induced_function(g.vertex(j)));
  }
  return out;
}

TopSpectralFamily grid_step_literal(const CellGrid& g) {
  // x in ]-inf, floor(l)[ iff floor(x) + 1 <= l; an open cell (a, b) meets it iff floor(a) + 1 <= l
  std::vector<double> entry(g.space.size());
  for (std::size_t j = 0; j < g.vertices(); ++j) {
    entry[g.vertex(j)] = std::floor(g.grid_point(j)) + 1;
    if (j < g.intervals) entry[g.edge(j)] = std::floor(g.grid_point(j)) + 1;
  }
  return family_from_entries(g, entry);
}

}  // namespace obsfn
