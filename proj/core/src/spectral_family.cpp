#include "obsfn/spectral_family.hpp"

#include <cmath>
#include <sstream>

#include "obsfn/error.hpp"

namespace obsfn {

SpectralFamily::SpectralFamily(LatticePtr lattice, ElementId top,
                               const std::vector<Breakpoint>& breakpoints)
    : lattice_(std::move(lattice)), top_(top) {
  if (!lattice_) throw InputError("spectral family without lattice");
  lattice_->require(top_);
  if (top_ == lattice_->zero()) throw PreconditionError("spectral family with top 0");
  if (breakpoints.empty()) throw InputError("empty spectral family");

  ElementId prev = lattice_->zero();
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const auto& bp = breakpoints[i];
    if (!std::isfinite(bp.lambda)) throw InputError("non-finite breakpoint");
    if (i > 0 && !(breakpoints[i - 1].lambda < bp.lambda)) {
      std::ostringstream os;
      os << "breakpoints not strictly increasing at lambda=" << bp.lambda;
      throw InputError(os.str());
    }
    lattice_->require(bp.value);
    if (!lattice_->leq(bp.value, top_)) {
      throw InputError("breakpoint value " + lattice_->name(bp.value) + " not below top " +
                       lattice_->name(top_));
    }
    if (!lattice_->leq(prev, bp.value)) {
      throw InputError("breakpoint values not monotone: " + lattice_->name(prev) + " then " +
                       lattice_->name(bp.value));
    }
    if (bp.value != prev) breakpoints_.push_back(bp);
    prev = bp.value;
  }
  if (prev != top_) {
    throw InputError("last breakpoint value " + lattice_->name(prev) + " is not top " +
                     lattice_->name(top_));
  }
}

SpectralFamily::SpectralFamily(LatticePtr lattice, const std::vector<Breakpoint>& breakpoints)
    : SpectralFamily(lattice, lattice ? lattice->one() : 0, breakpoints) {}

SpectralFamily SpectralFamily::constant(LatticePtr lattice, double c) {
  ElementId one = lattice->one();
  return SpectralFamily(std::move(lattice), one, {{c, one}});
}

ElementId SpectralFamily::eval(double lambda) const {
  ElementId out = lattice_->zero();
  for (const auto& bp : breakpoints_) {
    if (bp.lambda > lambda) break;
    out = bp.value;
  }
  return out;
}

SpectralFamily SpectralFamily::restrict(ElementId a) const {
  lattice_->require(a);
  if (a == lattice_->zero()) throw PreconditionError("restriction to 0");
  if (!lattice_->leq(a, top_)) {
    throw PreconditionError("restriction target " + lattice_->name(a) + " not below top");
  }
  std::vector<Breakpoint> out;
  out.reserve(breakpoints_.size());
  for (const auto& bp : breakpoints_) out.push_back({bp.lambda, lattice_->meet(bp.value, a)});
  return SpectralFamily(lattice_, a, out);
}

std::set<double> SpectralFamily::spectrum() const {
  std::set<double> out;
  for (const auto& bp : breakpoints_) out.insert(bp.lambda);
  return out;
}

}  // namespace obsfn
