#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "obsfn/lattice.hpp"

namespace obsfn {

/// Upward-closed, meet-closed, 0-free nonempty subset of a lattice.
struct DualIdeal {
  ElementSet members;

  bool contains(ElementId e) const { return members.contains(e); }
  friend bool operator==(const DualIdeal&, const DualIdeal&) = default;
};

bool is_filter_base(const Lattice& l, ElementSet s);
bool is_dual_ideal(const Lattice& l, ElementSet s);

/// Smallest dual ideal containing the filter base `f`: {q | exists p in f, p <= q}.
/// Throws PreconditionError if `f` is not a filter base.
DualIdeal cone(const Lattice& l, ElementSet f);

/// Smallest dual ideal containing an arbitrary set, if one exists
/// (none when the meet of `s` is 0 or `s` is empty).
std::optional<DualIdeal> generated_dual_ideal(const Lattice& l, ElementSet s);

/// H_a = {b | b >= a}; requires a != 0.
DualIdeal principal(const Lattice& l, ElementId a);

/// All dual ideals in canonical order (size, then sorted member list).
/// Lattices above `subset_scan_limit` elements use antichain generation.
std::vector<DualIdeal> enumerate_dual_ideals(const Lattice& l, std::size_t cap = 64,
                                             std::size_t subset_scan_limit = 20);

/// Maximal dual ideals, canonical order; cross-checked against {H_a | a atom}.
std::vector<DualIdeal> enumerate_quasipoints(const Lattice& l, std::size_t cap = 64);

/// Comma-separated member names in element order, e.g. "a,1".
std::string ideal_key(const Lattice& l, const DualIdeal& j);
/// Parses an ideal key (any member order); validates the dual-ideal axioms.
DualIdeal parse_ideal(const Lattice& l, const std::string& key);

/// The dual-ideal space D(L) with the Stone spectrum Q(L) inside it, and the
/// basis sets D_a / Q_a of their topologies.
class StoneSpectrum {
 public:
  explicit StoneSpectrum(LatticePtr lattice, std::size_t cap = 64);

  const LatticePtr& lattice_ptr() const { return lattice_; }
  const Lattice& lattice() const { return *lattice_; }

  const std::vector<DualIdeal>& dual_ideals() const { return ideals_; }
  /// Indices into dual_ideals() of the quasipoints.
  const std::vector<std::size_t>& quasipoints() const { return quasipoints_; }
  const DualIdeal& ideal(std::size_t i) const { return ideals_.at(i); }

  std::size_t index_of(const DualIdeal& j) const;
  std::optional<std::size_t> find(const DualIdeal& j) const;
  /// Index of H_a.
  std::size_t principal_index(ElementId a) const;
  /// Index of {1}.
  std::size_t top_index() const { return principal_index(lattice_->one()); }

  /// Q_a(L): quasipoint indices containing a.
  std::vector<std::size_t> quasipoints_containing(ElementId a) const;
  /// D_a(L): dual-ideal indices containing a.
  std::vector<std::size_t> ideals_containing(ElementId a) const;

  /// Inclusion diagram of D(L) in DOT (edges from smaller to larger ideal).
  std::string to_dot() const;

 private:
  LatticePtr lattice_;
  std::vector<DualIdeal> ideals_;
  std::vector<std::size_t> quasipoints_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

}  // namespace obsfn
