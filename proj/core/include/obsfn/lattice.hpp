#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "obsfn/element_set.hpp"

namespace obsfn {

struct LatticeOptions {
  std::size_t element_cap = 64;
};

/// A finite bounded lattice, optionally orthocomplemented.
///
/// Built from an order relation only: the reflexive-transitive closure is
/// taken, antisymmetry is checked, and every pair is verified to have a least
/// upper and greatest lower bound before the meet/join tables are cached.
/// Instances are immutable and shared between the structures built on them.
class Lattice {
 public:
  /// `order_pairs` lists (a, b) meaning a <= b; any generating set works.
  /// `ortho_pairs` lists (a, a'); symmetry and 0 <-> 1 are filled in.
  static std::shared_ptr<const Lattice> from_order(
      std::vector<std::string> names,
      const std::vector<std::pair<ElementId, ElementId>>& order_pairs,
      const std::vector<std::pair<ElementId, ElementId>>& ortho_pairs = {},
      LatticeOptions opts = {});

  /// Same, addressed by element names.
  static std::shared_ptr<const Lattice> from_named_order(
      std::vector<std::string> names,
      const std::vector<std::pair<std::string, std::string>>& order_pairs,
      const std::vector<std::pair<std::string, std::string>>& ortho_pairs = {},
      LatticeOptions opts = {});

  std::size_t size() const { return names_.size(); }
  ElementSet all() const { return ElementSet::first_n(size()); }
  ElementId zero() const { return zero_; }
  ElementId one() const { return one_; }

  const std::string& name(ElementId e) const;
  ElementId id(const std::string& name) const;
  std::optional<ElementId> find(const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }

  bool leq(ElementId a, ElementId b) const { return up_[a].contains(b); }
  bool lt(ElementId a, ElementId b) const { return a != b && leq(a, b); }
  ElementId meet(ElementId a, ElementId b) const { return meet_[a * size() + b]; }
  ElementId join(ElementId a, ElementId b) const { return join_[a * size() + b]; }

  /// Greatest lower bound; meet of the empty family is one().
  ElementId meet(ElementSet family) const;
  ElementId meet(std::span<const ElementId> family) const;
  /// Least upper bound; join of the empty family is zero().
  ElementId join(ElementSet family) const;
  ElementId join(std::span<const ElementId> family) const;

  /// Principal up-set {b | b >= a} and down-set {b | b <= a}.
  ElementSet up(ElementId a) const { return up_[a]; }
  ElementSet down(ElementId a) const { return down_[a]; }

  bool has_ortho() const { return !ortho_.empty(); }
  ElementId ortho(ElementId a) const;

  /// Pairs (a, b) with a covered by b, in lexicographic order.
  std::vector<std::pair<ElementId, ElementId>> covers() const;

  /// Checks that `id` is an element index.
  void require(ElementId id) const;

 private:
  Lattice() = default;

  std::vector<std::string> names_;
  std::map<std::string, ElementId> index_;
  std::vector<ElementSet> up_;
  std::vector<ElementSet> down_;
  std::vector<ElementId> meet_;
  std::vector<ElementId> join_;
  std::vector<ElementId> ortho_;
  ElementId zero_ = 0;
  ElementId one_ = 0;
};

using LatticePtr = std::shared_ptr<const Lattice>;

/// A subset of a parent lattice viewed as a lattice in its own right.
struct Sublattice {
  LatticePtr parent;
  LatticePtr lattice;
  /// embedding[i] is the parent element of sub element i.
  std::vector<ElementId> embedding;

  ElementId to_parent(ElementId sub) const { return embedding.at(sub); }
  std::optional<ElementId> from_parent(ElementId p) const;
  ElementSet members_in_parent() const { return ElementSet::from(embedding); }
};

/// The interval [0, a] of `parent`; its joins and meets are the parent's.
Sublattice interval_below(const LatticePtr& parent, ElementId a);

/// The induced sub-structure on `members`. Requires 0, 1 present and closure
/// under parent meet and join (and ortho when `require_ortho_closed`).
Sublattice induced_sublattice(const LatticePtr& parent, ElementSet members,
                              bool require_ortho_closed);

struct DistributivityReport {
  bool distributive = true;
  std::optional<std::array<ElementId, 3>> witness;
};

struct OrthomodularityReport {
  bool orthomodular = true;
  std::optional<std::pair<ElementId, ElementId>> witness;
};

DistributivityReport is_distributive(const Lattice& l);
/// Throws PreconditionError if `l` has no orthocomplement.
OrthomodularityReport is_orthomodular(const Lattice& l);
/// Checks the ortholattice laws; returns an explanation on failure.
std::optional<std::string> ortho_violation(const Lattice& l);

ElementSet atoms(const Lattice& l);
bool is_atomistic(const Lattice& l);
/// Elements compatible with every element; requires an orthomodular lattice.
ElementSet center(const Lattice& l);

/// Direct product with componentwise order and orthocomplement.
LatticePtr product(const Lattice& a, const Lattice& b);

/// Hasse diagram (cover relation) in Graphviz DOT.
std::string to_dot(const Lattice& l, const std::string& graph_name = "lattice");

}  // namespace obsfn
