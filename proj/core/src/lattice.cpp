#include "obsfn/lattice.hpp"

#include <algorithm>
#include <sstream>

#include "obsfn/error.hpp"

namespace obsfn {

namespace {

std::string pair_text(const std::vector<std::string>& names, ElementId a, ElementId b) {
  return "(" + names[a] + ", " + names[b] + ")";
}

}  // namespace

LatticePtr Lattice::from_order(std::vector<std::string> names,
                               const std::vector<std::pair<ElementId, ElementId>>& order_pairs,
                               const std::vector<std::pair<ElementId, ElementId>>& ortho_pairs,
                               LatticeOptions opts) {
  const std::size_t n = names.size();
  if (n == 0) throw InputError("lattice has no elements");
  if (opts.element_cap > ElementSet::kCapacity) {
    throw InputError("element cap " + std::to_string(opts.element_cap) + " exceeds the supported maximum of 64");
  }
  if (n > opts.element_cap) {
    throw ResourceError("lattice has " + std::to_string(n) + " elements, cap is " +
                        std::to_string(opts.element_cap));
  }

  std::shared_ptr<Lattice> l(new Lattice());
  l->names_ = std::move(names);
  for (ElementId i = 0; i < n; ++i) {
    if (!l->index_.emplace(l->names_[i], i).second) {
      throw InputError("duplicate element name '" + l->names_[i] + "'");
    }
  }

  // Reflexive-transitive closure over the up-set rows.
  l->up_.assign(n, ElementSet());
  for (ElementId i = 0; i < n; ++i) l->up_[i].insert(i);
  for (auto [a, b] : order_pairs) {
    if (a >= n || b >= n) throw InputError("order pair refers to an unknown element index");
    l->up_[a].insert(b);
  }
  for (ElementId k = 0; k < n; ++k) {
    for (ElementId i = 0; i < n; ++i) {
      if (l->up_[i].contains(k)) l->up_[i] |= l->up_[k];
    }
  }
  l->down_.assign(n, ElementSet());
  for (ElementId a = 0; a < n; ++a) {
    l->up_[a].for_each([&](ElementId b) { l->down_[b].insert(a); });
  }
  for (ElementId a = 0; a < n; ++a) {
    for (ElementId b = a + 1; b < n; ++b) {
      if (l->leq(a, b) && l->leq(b, a)) {
        throw InputError("order is not antisymmetric: " + pair_text(l->names_, a, b));
      }
    }
  }

  l->meet_.assign(n * n, 0);
  l->join_.assign(n * n, 0);
  for (ElementId a = 0; a < n; ++a) {
    for (ElementId b = a; b < n; ++b) {
      ElementSet ub = l->up_[a] & l->up_[b];
      std::optional<ElementId> lub;
      ub.for_each([&](ElementId u) {
        if (!lub && ub.is_subset_of(l->up_[u])) lub = u;
      });
      if (!lub) throw InputError("not a lattice: no least upper bound for " + pair_text(l->names_, a, b));
      ElementSet lb = l->down_[a] & l->down_[b];
      std::optional<ElementId> glb;
      lb.for_each([&](ElementId d) {
        if (!glb && lb.is_subset_of(l->down_[d])) glb = d;
      });
      if (!glb) throw InputError("not a lattice: no greatest lower bound for " + pair_text(l->names_, a, b));
      l->join_[a * n + b] = l->join_[b * n + a] = *lub;
      l->meet_[a * n + b] = l->meet_[b * n + a] = *glb;
    }
  }
  const ElementSet everything = ElementSet::first_n(n);
  for (ElementId a = 0; a < n; ++a) {
    if (l->up_[a] == everything) l->zero_ = a;
    if (l->down_[a] == everything) l->one_ = a;
  }

  if (!ortho_pairs.empty()) {
    constexpr ElementId unset = static_cast<ElementId>(-1);
    l->ortho_.assign(n, unset);
    auto assign = [&](ElementId a, ElementId b) {
      if (l->ortho_[a] != unset && l->ortho_[a] != b) {
        throw InputError("orthocomplement of '" + l->names_[a] + "' given twice");
      }
      l->ortho_[a] = b;
    };
    for (auto [a, b] : ortho_pairs) {
      if (a >= n || b >= n) throw InputError("ortho pair refers to an unknown element index");
      assign(a, b);
      assign(b, a);
    }
    if (l->ortho_[l->zero_] == unset) assign(l->zero_, l->one_);
    if (l->ortho_[l->one_] == unset) assign(l->one_, l->zero_);
    for (ElementId a = 0; a < n; ++a) {
      if (l->ortho_[a] == unset) throw InputError("no orthocomplement given for '" + l->names_[a] + "'");
    }
    if (auto why = ortho_violation(*l)) throw InputError("invalid orthocomplement: " + *why);
  }
  return l;
}

LatticePtr Lattice::from_named_order(std::vector<std::string> names,
                                     const std::vector<std::pair<std::string, std::string>>& order_pairs,
                                     const std::vector<std::pair<std::string, std::string>>& ortho_pairs,
                                     LatticeOptions opts) {
  std::map<std::string, ElementId> idx;
  for (ElementId i = 0; i < names.size(); ++i) idx.emplace(names[i], i);
  auto look = [&](const std::string& s) {
    auto it = idx.find(s);
    if (it == idx.end()) throw InputError("unknown element '" + s + "'");
    return it->second;
  };
  std::vector<std::pair<ElementId, ElementId>> order;
  for (const auto& [a, b] : order_pairs) order.emplace_back(look(a), look(b));
  std::vector<std::pair<ElementId, ElementId>> ortho;
  for (const auto& [a, b] : ortho_pairs) ortho.emplace_back(look(a), look(b));
  return from_order(std::move(names), order, ortho, opts);
}

const std::string& Lattice::name(ElementId e) const {
  require(e);
  return names_[e];
}

ElementId Lattice::id(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw InputError("unknown element '" + name + "'");
  return it->second;
}

std::optional<ElementId> Lattice::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Lattice::require(ElementId id) const {
  if (id >= size()) throw InputError("element index " + std::to_string(id) + " out of range");
}

ElementId Lattice::meet(ElementSet family) const {
  if (!family.is_subset_of(all())) throw InputError("family contains unknown elements");
  ElementId acc = one_;
  family.for_each([&](ElementId e) { acc = meet(acc, e); });
  return acc;
}

ElementId Lattice::meet(std::span<const ElementId> family) const {
  ElementId acc = one_;
  for (auto e : family) {
    require(e);
    acc = meet(acc, e);
  }
  return acc;
}

ElementId Lattice::join(ElementSet family) const {
  if (!family.is_subset_of(all())) throw InputError("family contains unknown elements");
  ElementId acc = zero_;
  family.for_each([&](ElementId e) { acc = join(acc, e); });
  return acc;
}

ElementId Lattice::join(std::span<const ElementId> family) const {
  ElementId acc = zero_;
  for (auto e : family) {
    require(e);
    acc = join(acc, e);
  }
  return acc;
}

ElementId Lattice::ortho(ElementId a) const {
  if (!has_ortho()) throw PreconditionError("lattice has no orthocomplement");
  require(a);
  return ortho_[a];
}

std::vector<std::pair<ElementId, ElementId>> Lattice::covers() const {
  std::vector<std::pair<ElementId, ElementId>> out;
  for (ElementId a = 0; a < size(); ++a) {
    for (ElementId b = 0; b < size(); ++b) {
      if (!lt(a, b)) continue;
      ElementSet between = up_[a] & down_[b];
      if (between.size() == 2) out.emplace_back(a, b);
    }
  }
  return out;
}

std::optional<ElementId> Sublattice::from_parent(ElementId p) const {
  auto it = std::find(embedding.begin(), embedding.end(), p);
  if (it == embedding.end()) return std::nullopt;
  return static_cast<ElementId>(it - embedding.begin());
}

namespace {

Sublattice build_induced(const LatticePtr& parent, ElementSet members, bool with_ortho) {
  Sublattice s;
  s.parent = parent;
  s.embedding = members.members();
  std::vector<std::string> names;
  for (auto e : s.embedding) names.push_back(parent->name(e));
  std::vector<std::pair<ElementId, ElementId>> order;
  std::vector<std::pair<ElementId, ElementId>> ortho;
  for (ElementId i = 0; i < s.embedding.size(); ++i) {
    for (ElementId j = 0; j < s.embedding.size(); ++j) {
      if (i != j && parent->leq(s.embedding[i], s.embedding[j])) order.emplace_back(i, j);
    }
    if (with_ortho) {
      auto it = std::find(s.embedding.begin(), s.embedding.end(), parent->ortho(s.embedding[i]));
      ortho.emplace_back(i, static_cast<ElementId>(it - s.embedding.begin()));
    }
  }
  s.lattice = Lattice::from_order(std::move(names), order, ortho);
  return s;
}

}  // namespace

Sublattice interval_below(const LatticePtr& parent, ElementId a) {
  parent->require(a);
  return build_induced(parent, parent->down(a), false);
}

Sublattice induced_sublattice(const LatticePtr& parent, ElementSet members, bool require_ortho_closed) {
  if (!members.is_subset_of(parent->all())) throw InputError("sublattice members outside parent");
  if (!members.contains(parent->zero()) || !members.contains(parent->one())) {
    throw PreconditionError("sublattice must contain 0 and 1");
  }
  for (auto a : members.members()) {
    for (auto b : members.members()) {
      if (!members.contains(parent->meet(a, b))) {
        throw PreconditionError("sublattice not closed under meet: " + parent->name(a) + " ^ " + parent->name(b));
      }
      if (!members.contains(parent->join(a, b))) {
        throw PreconditionError("sublattice not closed under join: " + parent->name(a) + " v " + parent->name(b));
      }
    }
    if (require_ortho_closed && !members.contains(parent->ortho(a))) {
      throw PreconditionError("sublattice not closed under orthocomplement at " + parent->name(a));
    }
  }
  return build_induced(parent, members, require_ortho_closed && parent->has_ortho());
}

DistributivityReport is_distributive(const Lattice& l) {
  const std::size_t n = l.size();
  for (ElementId a = 0; a < n; ++a) {
    for (ElementId b = 0; b < n; ++b) {
      for (ElementId c = 0; c < n; ++c) {
        if (l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c))) {
          return {false, std::array<ElementId, 3>{a, b, c}};
        }
      }
    }
  }
  return {};
}

OrthomodularityReport is_orthomodular(const Lattice& l) {
  if (!l.has_ortho()) throw PreconditionError("orthomodularity needs an orthocomplement");
  for (ElementId a = 0; a < l.size(); ++a) {
    for (ElementId b = 0; b < l.size(); ++b) {
      if (l.leq(a, b) && b != l.join(a, l.meet(b, l.ortho(a)))) {
        return {false, std::make_pair(a, b)};
      }
    }
  }
  return {};
}

std::optional<std::string> ortho_violation(const Lattice& l) {
  if (!l.has_ortho()) return "no orthocomplement";
  for (ElementId a = 0; a < l.size(); ++a) {
    const ElementId ac = l.ortho(a);
    if (l.ortho(ac) != a) return "not involutive at " + l.name(a);
    if (l.join(a, ac) != l.one()) return l.name(a) + " v " + l.name(ac) + " != 1";
    if (l.meet(a, ac) != l.zero()) return l.name(a) + " ^ " + l.name(ac) + " != 0";
    for (ElementId b = 0; b < l.size(); ++b) {
      if (l.leq(a, b) && !l.leq(l.ortho(b), ac)) {
        return "order not reversed on " + l.name(a) + " <= " + l.name(b);
      }
    }
  }
  return std::nullopt;
}

ElementSet atoms(const Lattice& l) {
  ElementSet out;
  for (ElementId a = 0; a < l.size(); ++a) {
    if (a != l.zero() && l.down(a).size() == 2) out.insert(a);
  }
  return out;
}

bool is_atomistic(const Lattice& l) {
  const ElementSet at = atoms(l);
  for (ElementId a = 0; a < l.size(); ++a) {
    if (l.join(l.down(a) & at) != a) return false;
  }
  return true;
}

ElementSet center(const Lattice& l) {
  auto om = is_orthomodular(l);
  if (!om.orthomodular) throw PreconditionError("center requires an orthomodular lattice");
  ElementSet out;
  for (ElementId z = 0; z < l.size(); ++z) {
    bool central = true;
    for (ElementId a = 0; a < l.size() && central; ++a) {
      central = z == l.join(l.meet(z, a), l.meet(z, l.ortho(a)));
    }
    if (central) out.insert(z);
  }
  return out;
}

LatticePtr product(const Lattice& a, const Lattice& b) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  if (na * nb > ElementSet::kCapacity) {
    throw ResourceError("product would have " + std::to_string(na * nb) + " elements");
  }
  std::vector<std::string> names;
  for (ElementId i = 0; i < na; ++i) {
    for (ElementId j = 0; j < nb; ++j) names.push_back("(" + a.name(i) + "," + b.name(j) + ")");
  }
  std::vector<std::pair<ElementId, ElementId>> order;
  for (auto [x, y] : a.covers()) {
    for (ElementId j = 0; j < nb; ++j) order.emplace_back(x * nb + j, y * nb + j);
  }
  for (auto [x, y] : b.covers()) {
    for (ElementId i = 0; i < na; ++i) order.emplace_back(i * nb + x, i * nb + y);
  }
  std::vector<std::pair<ElementId, ElementId>> ortho;
  if (a.has_ortho() && b.has_ortho()) {
    for (ElementId i = 0; i < na; ++i) {
      for (ElementId j = 0; j < nb; ++j) ortho.emplace_back(i * nb + j, a.ortho(i) * nb + b.ortho(j));
    }
  }
  return Lattice::from_order(std::move(names), order, ortho);
}

std::string to_dot(const Lattice& l, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph \"" << graph_name << "\" {\n  rankdir=BT;\n";
  for (ElementId a = 0; a < l.size(); ++a) os << "  n" << a << " [label=\"" << l.name(a) << "\"];\n";
  for (auto [a, b] : l.covers()) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace obsfn
