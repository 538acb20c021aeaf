#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obsfn/lattice.hpp"
#include "obsfn/matrix.hpp"
#include "obsfn/vn.hpp"

namespace obsfn {

/// Abelian subalgebra with its minimal projections P_1..P_m (m <= 6). The
/// nonzero projections of the context are the sums over nonempty masks; the
/// projection lattice is corpus::boolean(m) with element index = mask.
struct Context {
  std::string name;
  VNSubalgebra algebra;
  std::vector<CMatrix> minimal;
  LatticePtr lattice;
  bool inserted = false;  // added as an intersection or as CI

  std::size_t atoms() const { return minimal.size(); }
  std::uint64_t full_mask() const { return (std::uint64_t{1} << atoms()) - 1; }
  CMatrix projection(std::uint64_t mask) const;
  /// Mask of a projection of this context, if it is one.
  std::optional<std::uint64_t> find(const CMatrix& p, const Tolerances& tol = {}) const;
};

/// Finite diagram of abelian subalgebras closed under pairwise intersection
/// and containing CI; morphisms are the inclusions.
class ContextDiagram {
 public:
  /// Each context is generated by its list; abelianness is checked. The
  /// trivial context "CI" and missing intersections ("A&B") are inserted.
  static ContextDiagram build(std::size_t dim,
                              const std::vector<std::pair<std::string, std::vector<CMatrix>>>& contexts,
                              const Tolerances& tol = {});

  std::size_t ambient_dim() const { return dim_; }
  const std::vector<Context>& contexts() const { return contexts_; }
  const Context& context(std::size_t i) const { return contexts_.at(i); }
  std::size_t index(const std::string& name) const;
  /// Context i is a subalgebra of context j.
  bool includes(std::size_t i, std::size_t j) const { return incl_.at(i).at(j); }
  /// Index of the context equal to the intersection of i and j.
  std::size_t meet(std::size_t i, std::size_t j) const { return meet_.at(i).at(j); }
  /// Mask in context `sup` of the projection `mask` of context `sub`.
  std::uint64_t embed(std::size_t sub, std::size_t sup, std::uint64_t mask) const;
  const Tolerances& tolerances() const { return tol_; }

 private:
  std::size_t dim_ = 0;
  std::vector<Context> contexts_;
  std::vector<std::vector<bool>> incl_;
  std::vector<std::vector<std::size_t>> meet_;
  // embedding_[sub][sup][j]: mask in sup of minimal projection j of sub
  std::vector<std::vector<std::vector<std::uint64_t>>> embedding_;
  Tolerances tol_;
};

/// One table per context, indexed by mask (entry 0 unused). An empty table
/// marks a context whose values are to be filled by restriction.
struct GlobalSection {
  std::vector<std::vector<double>> tables;
};

/// Values equal within tol.rec relative to max(1, |a|, |b|).
bool same_value(double a, double b, const Tolerances& tol = {});

/// Fills every empty table by restricting from the first context above it
/// that has one. InputError when no such context exists.
void fill_restrictions(GlobalSection& s, const ContextDiagram& d);

/// f_A = restriction of the observable function of A to each context,
/// r(P) = inf { l | P <= E_l }; cross-checked against the core-based
/// restricted operator and against compatibility.
GlobalSection section_from_operator(const CMatrix& a, const ContextDiagram& d);

struct SectionReport {
  bool holds = true;
  std::optional<std::pair<std::size_t, std::size_t>> contexts;
  /// Mask in the intersection context and the two disagreeing values.
  std::uint64_t mask = 0;
  double left = 0, right = 0;
};

/// PreconditionError naming the context when a table is not completely
/// increasing (r(mask) = max over its minimal projections).
SectionReport is_global_section(const GlobalSection& s, const ContextDiagram& d);

struct GluedValue {
  CMatrix projection;
  double value;
  std::size_t context;
  std::uint64_t mask;
};

struct GlueReport {
  /// The glued function on all nonzero projections of the diagram.
  std::vector<GluedValue> values;

  /// gs7 (i) on commuting families whose join lies in the diagram.
  bool commuting_ok = true;
  std::vector<std::size_t> commuting_witness;
  std::size_t commuting_checked = 0;
  std::size_t commuting_skipped = 0;  // join not among the diagram's projections

  /// f(join S) = max f(S) on all families of up to three projections.
  bool completely_increasing = true;
  std::vector<std::size_t> increasing_witness;

  /// Some Hermitian A has r_A = f on every projection of the diagram.
  bool extendable = false;
  std::optional<CMatrix> op;
  /// More than one rank-1 value below the maximum (dim 2), or the values
  /// below the maximum leave a plane / the lowest ones leave a line (dim 3).
  bool rank_one_pattern_violation = false;
  std::string detail;
};

/// Requires a global section. Throws CheckFailure with a JSON witness when two
/// contexts give one projection different values.
GlueReport glue_section(const GlobalSection& s, const ContextDiagram& d, std::size_t family_cap = 1'000'000);

/// Table of f on the projections of context i (f given on all projections of
/// the diagram in the order of GlueReport::values).
GlobalSection split_function(const std::vector<GluedValue>& f, const ContextDiagram& d);

struct SectionSearch {
  std::size_t assignments = 0;
  std::size_t global_sections = 0;
  std::size_t non_operator = 0;
  std::vector<GlobalSection> examples;
};

/// Assigns every value in `values` to each distinct minimal projection of the
/// diagram, keeps the assignments that form global sections and counts those
/// no Hermitian matrix induces. Keeps up to `keep` examples.
SectionSearch search_non_operator_sections(const ContextDiagram& d, const std::vector<double>& values,
                                           std::size_t cap = 200'000, std::size_t keep = 4);

}  // namespace obsfn
