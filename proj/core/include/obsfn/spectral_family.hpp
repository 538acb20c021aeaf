#pragma once

#include <set>
#include <vector>

#include "obsfn/lattice.hpp"

namespace obsfn {

struct Breakpoint {
  double lambda;
  ElementId value;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// A bounded right-continuous step map from the reals into the interval
/// [0, top] of a finite lattice. E(lambda) is 0 below the first breakpoint
/// and top from the last one on. Stored in canonical form: lambdas strictly
/// increasing, values strictly increasing, no breakpoint with value 0.
class SpectralFamily {
 public:
  /// Canonicalizes `breakpoints`: lambdas must be finite and strictly
  /// increasing, values monotone and below `top`, the last value equal to
  /// `top`. Repeated values (and leading zeros) are dropped.
  SpectralFamily(LatticePtr lattice, ElementId top, const std::vector<Breakpoint>& breakpoints);

  /// Family with top = lattice one.
  SpectralFamily(LatticePtr lattice, const std::vector<Breakpoint>& breakpoints);

  /// [(c, top)]: the family of c times the identity.
  static SpectralFamily constant(LatticePtr lattice, double c);

  const LatticePtr& lattice_ptr() const { return lattice_; }
  const Lattice& lattice() const { return *lattice_; }
  ElementId top() const { return top_; }
  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }

  ElementId eval(double lambda) const;

  /// lambda -> E(lambda) meet a, a family on [0, a]; requires 0 != a <= top.
  SpectralFamily restrict(ElementId a) const;

  /// Breakpoint lambdas of the canonical form.
  std::set<double> spectrum() const;

  friend bool operator==(const SpectralFamily& x, const SpectralFamily& y) {
    return x.lattice_ == y.lattice_ && x.top_ == y.top_ && x.breakpoints_ == y.breakpoints_;
  }

 private:
  LatticePtr lattice_;
  ElementId top_;
  std::vector<Breakpoint> breakpoints_;
};

}  // namespace obsfn
