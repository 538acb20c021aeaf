#include "obsfn/stone.hpp"

#include <algorithm>
#include <sstream>

#include "obsfn/error.hpp"

namespace obsfn {

namespace {

ElementSet upward_closure(const Lattice& l, ElementSet s) {
  ElementSet out;
  s.for_each([&](ElementId p) { out |= l.up(p); });
  return out;
}

void check_cap(const Lattice& l, std::size_t cap) {
  if (l.size() > cap) {
    throw ResourceError("dual-ideal enumeration: " + std::to_string(l.size()) +
                        " elements exceed cap " + std::to_string(cap));
  }
}

}  // namespace

bool is_filter_base(const Lattice& l, ElementSet s) {
  if (s.empty() || s.contains(l.zero())) return false;
  auto m = s.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      // some member below both = some member below the meet
      if ((l.down(l.meet(m[i], m[j])) & s).empty()) return false;
    }
  }
  return true;
}

bool is_dual_ideal(const Lattice& l, ElementSet s) {
  if (s.empty() || s.contains(l.zero())) return false;
  if (!s.is_subset_of(l.all())) return false;
  bool ok = true;
  s.for_each([&](ElementId a) {
    if (!l.up(a).is_subset_of(s)) ok = false;
  });
  if (!ok) return false;
  auto m = s.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (!s.contains(l.meet(m[i], m[j]))) return false;
    }
  }
  return true;
}

DualIdeal cone(const Lattice& l, ElementSet f) {
  if (!f.is_subset_of(l.all())) throw InputError("cone: unknown element in filter base");
  if (!is_filter_base(l, f)) throw PreconditionError("cone: argument is not a filter base");
  return DualIdeal{upward_closure(l, f)};
}

std::optional<DualIdeal> generated_dual_ideal(const Lattice& l, ElementSet s) {
  if (!s.is_subset_of(l.all())) throw InputError("generated_dual_ideal: unknown element");
  if (s.empty()) return std::nullopt;
  ElementId m = l.meet(s);
  if (m == l.zero()) return std::nullopt;
  return DualIdeal{l.up(m)};
}

DualIdeal principal(const Lattice& l, ElementId a) {
  l.require(a);
  if (a == l.zero()) throw PreconditionError("principal dual ideal of 0");
  return DualIdeal{l.up(a)};
}

std::vector<DualIdeal> enumerate_dual_ideals(const Lattice& l, std::size_t cap,
                                             std::size_t subset_scan_limit) {
  check_cap(l, cap);
  std::vector<DualIdeal> out;
  const std::size_t n = l.size();
  if (n <= subset_scan_limit) {
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t bits = 1; bits < limit; ++bits) {
      ElementSet s(bits);
      if (is_dual_ideal(l, s)) out.push_back(DualIdeal{s});
    }
  } else {
    // An antichain with two or more members never has a meet-closed upward
    // closure, so every dual ideal is generated by a single element.
    for (ElementId a = 0; a < n; ++a) {
      if (a == l.zero()) continue;
      ElementSet s = l.up(a);
      if (!is_dual_ideal(l, s)) throw ConsistencyError("principal set is not a dual ideal");
      out.push_back(DualIdeal{s});
    }
  }
  std::sort(out.begin(), out.end(), [](const DualIdeal& x, const DualIdeal& y) {
    return canonical_less(x.members, y.members);
  });
  return out;
}

namespace {

std::vector<std::size_t> maximal_indices(const std::vector<DualIdeal>& ideals) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ideals.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < ideals.size() && maximal; ++j) {
      if (i != j && ideals[i].members.is_subset_of(ideals[j].members)) maximal = false;
    }
    if (maximal) out.push_back(i);
  }
  return out;
}

void cross_check_atoms(const Lattice& l, const std::vector<DualIdeal>& ideals,
                       const std::vector<std::size_t>& maximal) {
  ElementSet at = atoms(l);
  if (at.size() != maximal.size()) {
    throw ConsistencyError("quasipoint count differs from atom count");
  }
  for (auto i : maximal) {
    ElementSet hit = ideals[i].members & at;
    if (hit.size() != 1 || ideals[i].members != l.up(hit.members().front())) {
      throw ConsistencyError("quasipoint is not the principal ideal of an atom");
    }
  }
}

}  // namespace

std::vector<DualIdeal> enumerate_quasipoints(const Lattice& l, std::size_t cap) {
  auto ideals = enumerate_dual_ideals(l, cap);
  auto idx = maximal_indices(ideals);
  cross_check_atoms(l, ideals, idx);
  std::vector<DualIdeal> out;
  for (auto i : idx) out.push_back(ideals[i]);
  return out;
}

std::string ideal_key(const Lattice& l, const DualIdeal& j) {
  std::string out;
  j.members.for_each([&](ElementId e) {
    if (!out.empty()) out += ',';
    out += l.name(e);
  });
  return out;
}

DualIdeal parse_ideal(const Lattice& l, const std::string& key) {
  // Names may contain commas ("{1,2}"), so take the longest name that ends
  // at a separator.
  ElementSet s;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < key.size() && (key[pos] == ' ' || key[pos] == '\t')) ++pos;
  };
  skip_space();
  while (pos < key.size()) {
    std::size_t best = 0;
    ElementId found = 0;
    for (ElementId e = 0; e < l.size(); ++e) {
      const auto& n = l.name(e);
      if (n.size() <= best || key.compare(pos, n.size(), n) != 0) continue;
      std::size_t end = pos + n.size();
      while (end < key.size() && (key[end] == ' ' || key[end] == '\t')) ++end;
      if (end == key.size() || key[end] == ',') {
        best = n.size();
        found = e;
      }
    }
    if (best == 0) throw InputError("unknown element in ideal \"" + key + "\" at offset " + std::to_string(pos));
    s.insert(found);
    pos += best;
    skip_space();
    if (pos < key.size()) {
      ++pos;
      skip_space();
      if (pos == key.size()) throw InputError("empty element name in ideal \"" + key + "\"");
    }
  }
  if (!is_dual_ideal(l, s)) throw InputError("\"" + key + "\" is not a dual ideal");
  return DualIdeal{s};
}

StoneSpectrum::StoneSpectrum(LatticePtr lattice, std::size_t cap)
    : lattice_(std::move(lattice)) {
  ideals_ = enumerate_dual_ideals(*lattice_, cap);
  quasipoints_ = maximal_indices(ideals_);
  cross_check_atoms(*lattice_, ideals_, quasipoints_);
  for (std::size_t i = 0; i < ideals_.size(); ++i) index_[ideals_[i].members.bits()] = i;
}

std::optional<std::size_t> StoneSpectrum::find(const DualIdeal& j) const {
  auto it = index_.find(j.members.bits());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t StoneSpectrum::index_of(const DualIdeal& j) const {
  auto i = find(j);
  if (!i) throw InputError("not a dual ideal of this lattice: {" + ideal_key(*lattice_, j) + "}");
  return *i;
}

std::size_t StoneSpectrum::principal_index(ElementId a) const {
  return index_of(principal(*lattice_, a));
}

std::vector<std::size_t> StoneSpectrum::quasipoints_containing(ElementId a) const {
  lattice_->require(a);
  std::vector<std::size_t> out;
  for (auto q : quasipoints_) {
    if (ideals_[q].contains(a)) out.push_back(q);
  }
  return out;
}

std::vector<std::size_t> StoneSpectrum::ideals_containing(ElementId a) const {
  lattice_->require(a);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ideals_.size(); ++i) {
    if (ideals_[i].contains(a)) out.push_back(i);
  }
  return out;
}

std::string StoneSpectrum::to_dot() const {
  std::ostringstream os;
  os << "digraph dual_ideals {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < ideals_.size(); ++i) {
    bool q = std::find(quasipoints_.begin(), quasipoints_.end(), i) != quasipoints_.end();
    os << "  d" << i << " [label=\"{" << ideal_key(*lattice_, ideals_[i]) << "}\""
       << (q ? ", shape=box" : "") << "];\n";
  }
  // cover relation of inclusion, smaller ideal at the bottom
  for (std::size_t i = 0; i < ideals_.size(); ++i) {
    for (std::size_t j = 0; j < ideals_.size(); ++j) {
      if (i == j || !ideals_[i].members.is_subset_of(ideals_[j].members)) continue;
      bool cover = true;
      for (std::size_t k = 0; k < ideals_.size() && cover; ++k) {
        if (k == i || k == j) continue;
        if (ideals_[i].members.is_subset_of(ideals_[k].members) &&
            ideals_[k].members.is_subset_of(ideals_[j].members)) {
          cover = false;
        }
      }
      if (cover) os << "  d" << i << " -> d" << j << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace obsfn
