#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obsfn/spectral_family.hpp"
#include "obsfn/stone.hpp"

namespace obsfn {

using StonePtr = std::shared_ptr<const StoneSpectrum>;

/// Real table on the dual ideals of a finite lattice, indexed like
/// StoneSpectrum::dual_ideals().
class ObservableFunction {
 public:
  ObservableFunction(StonePtr space, std::vector<double> values);

  const StonePtr& space_ptr() const { return space_; }
  const StoneSpectrum& space() const { return *space_; }
  const Lattice& lattice() const { return space_->lattice(); }
  const std::vector<double>& values() const { return values_; }

  double at(std::size_t ideal_index) const { return values_.at(ideal_index); }
  double at(const DualIdeal& j) const { return values_.at(space_->index_of(j)); }
  /// f(H_a).
  double at_principal(ElementId a) const { return at(space_->principal_index(a)); }

  /// Sorted distinct values.
  std::vector<double> image() const;

  friend bool operator==(const ObservableFunction& x, const ObservableFunction& y) {
    return x.space_ == y.space_ && x.values_ == y.values_;
  }

 private:
  StonePtr space_;
  std::vector<double> values_;
};

/// Real function on the nonzero elements of a lattice; entry zero() is unused.
struct IncreasingFunction {
  LatticePtr lattice;
  std::vector<double> values;

  double at(ElementId p) const { return values.at(p); }
};

/// Verdict of an axiom check. `ideals` / `elements` hold the first witness.
struct AxiomReport {
  bool holds = true;
  std::vector<std::size_t> ideals;
  std::vector<ElementId> elements;
  std::string detail;
};

/// f_E(J) = min { lambda_i | E_i in J }; requires top == one.
double observable_from_spectral(const SpectralFamily& e, const DualIdeal& j);
ObservableFunction observable_from_spectral(const SpectralFamily& e, const StonePtr& space);

/// Exhaustive over all subfamilies when there are at most `exhaustive_limit`
/// dual ideals; pairs otherwise (pairs suffice since intersections of dual
/// ideals are dual ideals).
AxiomReport check_intersection_condition(const ObservableFunction& f,
                                         std::size_t exhaustive_limit = 16);

/// Basis form: every J0 has P in J0 with f <= f(J0) on all of D_P.
AxiomReport check_upper_semicontinuous(const ObservableFunction& f);

/// Minimal preimages J_l = intersection of f^-1(l), E_l = inf J_l.
/// Throws CheckFailure carrying the failed axiom's witness.
SpectralFamily reconstruct(const ObservableFunction& f);

IncreasingFunction r_from_f(const ObservableFunction& f);
double f_from_r(const IncreasingFunction& r, const DualIdeal& j);
ObservableFunction f_from_r(const IncreasingFunction& r, const StonePtr& space);

/// r(join S) = max r(S) for every nonempty S of nonzero elements; all subsets
/// up to `exhaustive_limit` nonzero elements, pairs otherwise.
AxiomReport check_completely_increasing(const IncreasingFunction& r,
                                        std::size_t exhaustive_limit = 16);

struct ObservabilityReport {
  bool observable = false;
  IncreasingFunction r;
  AxiomReport check;
  /// f_r agrees with g on the quasipoints.
  bool restriction_agrees = false;
  std::optional<SpectralFamily> family;
};

/// g indexed like StoneSpectrum::quasipoints(). r(P) = max g over Q_P.
ObservabilityReport observability_criterion(const StonePtr& space, const std::vector<double>& g);

/// (rho f)(I) = f(cone of I in the parent) on the dual ideals of `sub`.
/// `sub_space` must be the Stone spectrum of sub.lattice.
ObservableFunction restrict_observable(const ObservableFunction& f, const Sublattice& sub,
                                       const StonePtr& sub_space);

/// Names of ideals / elements for witness printing.
std::vector<std::string> ideal_keys(const StoneSpectrum& s, const std::vector<std::size_t>& idx);

}  // namespace obsfn
