#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "obsfn/element_set.hpp"
#include "obsfn/lattice.hpp"

namespace obsfn {

using PointSet = ElementSet;

/// A finite topological space (at most 64 points), stored through the
/// minimal open neighbourhood of each point.
class FiniteTopSpace {
 public:
  /// Validates that `opens` contains the empty and the full set and is
  /// closed under union and intersection.
  static FiniteTopSpace from_opens(std::vector<std::string> points, const std::vector<PointSet>& opens);
  /// `nbhd[x]` must contain x and satisfy y in nbhd[x] => nbhd[y] subset of nbhd[x].
  static FiniteTopSpace from_neighbourhoods(std::vector<std::string> points, std::vector<PointSet> nbhd);
  /// All topologies on n <= 4 unnamed points "1".."n" (one per preorder).
  static std::vector<FiniteTopSpace> all_topologies(std::size_t n);

  std::size_t size() const { return points_.size(); }
  PointSet all() const { return PointSet::first_n(size()); }
  const std::vector<std::string>& point_names() const { return points_; }
  const std::string& name(std::size_t x) const { return points_.at(x); }
  std::size_t point(const std::string& name) const;
  PointSet minimal_neighbourhood(std::size_t x) const { return nbhd_.at(x); }

  bool is_open(PointSet s) const;
  bool is_closed(PointSet s) const { return is_open(all().minus(s)); }
  PointSet interior(PointSet s) const;
  PointSet closure(PointSet s) const;
  /// Interior relative to the subspace `sub`.
  PointSet interior_in(PointSet sub, PointSet s) const;
  bool is_regular_open(PointSet s) const { return is_open(s) && interior(closure(s)) == s; }

  /// All open sets in canonical order. Throws ResourceError above `cap`.
  std::vector<PointSet> opens(std::size_t cap = 64) const;
  /// The open-set lattice T(M); element i is opens()[i].
  LatticePtr open_set_lattice() const;

  std::string format(PointSet s) const;
  /// Specialization preorder in DOT: x -> y when x lies in the closure of {y}.
  std::string to_dot() const;

 private:
  std::vector<std::string> points_;
  std::vector<PointSet> nbhd_;
};

/// Finite trace of the order topology of [x0, xN] on a uniform grid: 0-cells
/// at grid points, 1-cells for the open intervals between them. A 1-cell is
/// an open point; the minimal neighbourhood of a 0-cell adds its two
/// adjacent 1-cells. At most 31 intervals.
struct CellGrid {
  double x0 = 0, step = 1;
  std::size_t intervals = 0;
  FiniteTopSpace space;

  static CellGrid make(double x0, double x1, double step);
  /// Parses "x0:x1:step".
  static CellGrid parse(const std::string& spec);

  std::size_t vertex(std::size_t j) const { return 2 * j; }
  std::size_t edge(std::size_t j) const { return 2 * j + 1; }
  std::size_t vertices() const { return intervals + 1; }
  double grid_point(std::size_t j) const { return x0 + static_cast<double>(j) * step; }
};

struct TopBreakpoint {
  double lambda;
  PointSet value;

  friend bool operator==(const TopBreakpoint&, const TopBreakpoint&) = default;
};

/// Step spectral family in T(M): value `base` below the first breakpoint.
/// Canonical: lambdas and values strictly increasing, every value open.
/// The last value is M unless the family is flagged unbounded above.
class TopSpectralFamily {
 public:
  TopSpectralFamily(const FiniteTopSpace& space, PointSet base, const std::vector<TopBreakpoint>& bps,
                    bool unbounded_above = false);

  const FiniteTopSpace& space() const { return space_; }
  PointSet base() const { return base_; }
  const std::vector<TopBreakpoint>& breakpoints() const { return bps_; }
  bool unbounded_above() const { return unbounded_; }

  PointSet eval(double lambda) const;
  /// M minus the intersection of all values (= M minus base).
  PointSet admissible_domain() const { return space_.all().minus(base_); }
  /// inf { lambda | x in sigma(lambda) }; DomainError outside the admissible
  /// domain (or for points that never enter an unbounded family).
  double induced_function(std::size_t x) const;
  std::set<double> spectrum() const;

  friend bool operator==(const TopSpectralFamily& a, const TopSpectralFamily& b) {
    return a.base_ == b.base_ && a.bps_ == b.bps_ && a.unbounded_ == b.unbounded_;
  }

 private:
  FiniteTopSpace space_;
  PointSet base_;
  std::vector<TopBreakpoint> bps_;
  bool unbounded_;
};

/// sigma_f(lambda) = int f^-1(]-inf, lambda]) over the values of f.
TopSpectralFamily sigma_from_function(const FiniteTopSpace& space, const std::vector<double>& f);

/// f continuous into the reals: every level set is open.
bool is_continuous_function(const FiniteTopSpace& space, const std::vector<double>& f);

struct ContinuityReport {
  bool continuous = true;
  /// lambda < mu with closure(sigma(lambda)) not inside sigma(mu).
  std::optional<std::pair<double, double>> witness;
  /// Only meaningful when continuous: all values regular open, domain open.
  bool values_regular_open = true;
  bool domain_open = true;
  bool domain_dense = true;
};

/// Exact check of closure(sigma(l)) subset of sigma(m) for all l < m
/// (resolution 0), or, for grid discretizations, for all l, m with
/// m - l >= resolution.
ContinuityReport is_continuous_family(const TopSpectralFamily& s, double resolution = 0.0);

struct SpectrumReport {
  std::set<double> spectrum;
  /// Maximal open intervals of the resolvent set, as (lo, hi) with +-inf ends.
  std::vector<std::pair<double, double>> resolvent;
  std::set<double> image_closure;
  bool equal = false;
};
SpectrumReport spectrum_and_resolvent(const TopSpectralFamily& s);

/// The example families on a cell grid: "id", "abs", "ln", "step".
/// A 0-cell x enters at t(x), a 1-cell at the infimum of t over it, where
/// t is the target function (ln|0| = -inf puts the cell into the base).
TopSpectralFamily grid_family(const CellGrid& grid, const std::string& name);
/// The target function of a named grid family at a real point.
double grid_target(const std::string& name, double x);
/// Sampled values at grid points.
struct GridFunction {
  std::vector<double> points;
  std::vector<double> values;
};
/// The induced function of a grid family at the grid points of its admissible domain.
GridFunction sample_induced(const CellGrid& grid, const TopSpectralFamily& s);

/// sigma_step exactly as ]-inf, floor(l)[, whose induced function is floor(x) + 1.
TopSpectralFamily grid_step_literal(const CellGrid& grid);

}  // namespace obsfn
