#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "obsfn/lattice.hpp"
#include "obsfn/stone.hpp"
#include "obsfn/topology.hpp"

namespace obsfn {

/// Presheaf of finite sets on a finite lattice. S(a) is a list of labels;
/// the restriction for a <= b maps indices of S(b) to indices of S(a).
class FinitePresheaf {
 public:
  explicit FinitePresheaf(LatticePtr lattice);

  void set_values(ElementId a, std::vector<std::string> labels);
  /// map[i] is the index in S(a) of the restriction of S(b)[i].
  void set_restriction(ElementId a, ElementId b, std::vector<std::size_t> map);

  const LatticePtr& lattice_ptr() const { return lattice_; }
  const Lattice& lattice() const { return *lattice_; }
  std::size_t size(ElementId a) const { return labels_.at(a).size(); }
  const std::vector<std::string>& labels(ElementId a) const { return labels_.at(a); }
  bool has_restriction(ElementId a, ElementId b) const { return maps_.count({a, b}) > 0; }
  /// Index in S(a) of the restriction of S(b)[i]; InputError if the map is missing.
  std::size_t restrict(ElementId a, ElementId b, std::size_t i) const;
  /// Throws InputError unless every a <= b has a total map into range.
  void validate() const;

 private:
  LatticePtr lattice_;
  std::vector<std::vector<std::string>> labels_;
  std::map<std::pair<ElementId, ElementId>, std::vector<std::size_t>> maps_;
};

struct PresheafReport {
  bool holds = true;
  /// (a, b, c) with a <= b <= c; for identity failures a = b = c.
  std::vector<ElementId> chain;
  std::size_t value = 0;
  std::string detail;
};

/// rho_a^a = id and rho_a^b rho_b^c = rho_a^c over all chains.
PresheafReport check_presheaf(const FinitePresheaf& s);

struct SheafWitness {
  ElementId element = 0;
  std::vector<ElementId> cover;
  /// One index into S(cover[i]) per cover element.
  std::vector<std::size_t> family;
  std::size_t gluings = 0;
};

struct SheafReport {
  bool holds = true;
  bool existence = true;
  bool uniqueness = true;
  std::optional<SheafWitness> existence_witness;
  std::optional<SheafWitness> uniqueness_witness;
  std::size_t covers_checked = 0;
  std::size_t families_checked = 0;
};

/// Condition (3) for every element a, every antichain cover a = join a_i of
/// elements strictly between 0 and a, and every compatible family. Covers
/// with comparable members or with 0 add no new cases once S(0) is a
/// singleton, which is checked through the empty cover of 0.
/// ResourceError when more than `cap` families would be examined.
SheafReport check_sheaf_condition(const FinitePresheaf& s, std::size_t cap = 2'000'000);

/// Spectral families of [0, a] with breakpoints in `lambdas`, restricted by
/// E -> E meet b. S(0) is a singleton.
FinitePresheaf spectral_presheaf(const LatticePtr& l, const std::vector<double>& lambdas);

/// S(a) = values for all a, restrictions the identity.
FinitePresheaf constant_presheaf(const LatticePtr& l, const std::vector<std::string>& values);

/// Functions U -> values on the open sets of a finite space, over
/// space.open_set_lattice() (element i is space.opens()[i]).
FinitePresheaf function_presheaf(const FiniteTopSpace& space, const std::vector<std::string>& values);

/// Germs at the quasipoint H_atom: the colimit over b >= atom is S(atom),
/// reached from S(b) by restriction.
struct Stalk {
  ElementId atom = 0;
  std::vector<std::string> germs;
};
/// `quasipoint` indexes space.dual_ideals().
Stalk stalk(const FinitePresheaf& s, const StoneSpectrum& space, std::size_t quasipoint);
/// Germ at `st` of S(b)[i]; requires atom <= b.
std::size_t germ(const FinitePresheaf& s, const Stalk& st, ElementId b, std::size_t i);

/// Sections of the etale space over the (discrete) finite Stone spectrum:
/// a presheaf on the Boolean lattice 2^Q, where element U (a bitmask over the
/// quasipoints in order) carries the product of the stalks in U.
struct Sheafification {
  FinitePresheaf sheaf;
  std::vector<Stalk> stalks;
  /// basis[a]: bitmask of the quasipoints containing a (the basis set Q_a).
  std::vector<std::uint64_t> basis;
  /// canonical[a][i]: image of S(a)[i] in S+(Q_a).
  std::vector<std::vector<std::size_t>> canonical;
};
/// At most 6 quasipoints and `cap` sections per element.
Sheafification sheafify(const FinitePresheaf& s, std::size_t cap = 100'000);

}  // namespace obsfn
