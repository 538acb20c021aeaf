#include "obsfn/observable.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "obsfn/error.hpp"

namespace obsfn {

ObservableFunction::ObservableFunction(StonePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw InputError("observable function without dual-ideal space");
  if (values_.size() != space_->dual_ideals().size()) {
    throw InputError("observable table has " + std::to_string(values_.size()) +
                     " entries, expected " + std::to_string(space_->dual_ideals().size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InputError("observable table value is not finite");
  }
}

std::vector<double> ObservableFunction::image() const {
  std::vector<double> out = values_;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double observable_from_spectral(const SpectralFamily& e, const DualIdeal& j) {
  if (e.top() != e.lattice().one()) {
    throw PreconditionError("observable function needs a family with top 1");
  }
  for (const auto& bp : e.breakpoints()) {
    if (j.contains(bp.value)) return bp.lambda;
  }
  // unreachable for dual ideals: the last value is 1
  throw InputError("dual ideal does not contain 1");
}

ObservableFunction observable_from_spectral(const SpectralFamily& e, const StonePtr& space) {
  if (&space->lattice() != &e.lattice()) throw InputError("family and space on different lattices");
  std::vector<double> vals;
  vals.reserve(space->dual_ideals().size());
  for (const auto& j : space->dual_ideals()) vals.push_back(observable_from_spectral(e, j));
  return ObservableFunction(space, std::move(vals));
}

std::vector<std::string> ideal_keys(const StoneSpectrum& s, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(ideal_key(s.lattice(), s.ideal(i)));
  return out;
}

AxiomReport check_intersection_condition(const ObservableFunction& f,
                                         std::size_t exhaustive_limit) {
  const auto& ideals = f.space().dual_ideals();
  const std::size_t m = ideals.size();
  AxiomReport rep;
  auto fail = [&](std::vector<std::size_t> fam, std::size_t meet_idx, double sup) {
    rep.holds = false;
    rep.ideals = std::move(fam);
    std::ostringstream os;
    os << "f(intersection) = " << f.at(meet_idx) << " but sup = " << sup;
    rep.detail = os.str();
  };
  if (m <= exhaustive_limit && m < 63) {
    const std::uint64_t limit = std::uint64_t{1} << m;
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
      if ((mask & (mask - 1)) == 0) continue;  // singletons hold trivially
      ElementSet inter = f.lattice().all();
      double sup = -INFINITY;
      std::vector<std::size_t> fam;
      for (std::uint64_t b = mask; b != 0; b &= b - 1) {
        auto i = static_cast<std::size_t>(std::countr_zero(b));
        inter &= ideals[i].members;
        sup = std::max(sup, f.at(i));
        fam.push_back(i);
      }
      std::size_t k = f.space().index_of(DualIdeal{inter});
      if (f.at(k) != sup) {
        fail(std::move(fam), k, sup);
        return rep;
      }
    }
    return rep;
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      std::size_t k = f.space().index_of(DualIdeal{ideals[i].members & ideals[j].members});
      double sup = std::max(f.at(i), f.at(j));
      if (f.at(k) != sup) {
        fail({i, j}, k, sup);
        return rep;
      }
    }
  }
  return rep;
}

AxiomReport check_upper_semicontinuous(const ObservableFunction& f) {
  const auto& s = f.space();
  const auto& l = f.lattice();
  AxiomReport rep;
  for (std::size_t j0 = 0; j0 < s.dual_ideals().size(); ++j0) {
    bool found = false;
    s.ideal(j0).members.for_each([&](ElementId p) {
      if (found) return;
      double mx = -INFINITY;
      for (auto k : s.ideals_containing(p)) mx = std::max(mx, f.at(k));
      if (mx <= f.at(j0)) found = true;
    });
    if (!found) {
      rep.holds = false;
      rep.ideals = {j0};
      rep.detail = "no P in {" + ideal_key(l, s.ideal(j0)) +
                   "} keeps f below f(J0) on its basis set";
      return rep;
    }
  }
  return rep;
}

namespace {

std::string witness_json(const StoneSpectrum& s, const std::string& axiom, const AxiomReport& r) {
  nlohmann::json w;
  w["axiom"] = axiom;
  w["family"] = ideal_keys(s, r.ideals);
  w["detail"] = r.detail;
  return w.dump();
}

}  // namespace

SpectralFamily reconstruct(const ObservableFunction& f) {
  const auto& s = f.space();
  const auto& l = f.lattice();
  if (auto r = check_intersection_condition(f); !r.holds) {
    throw CheckFailure("reconstruction refused: intersection condition fails",
                       witness_json(s, "intersection", r));
  }
  if (auto r = check_upper_semicontinuous(f); !r.holds) {
    throw CheckFailure("reconstruction refused: upper semicontinuity fails",
                       witness_json(s, "upper_semicontinuity", r));
  }
  std::vector<Breakpoint> bps;
  for (double lam : f.image()) {
    ElementSet inter = l.all();
    for (std::size_t i = 0; i < s.dual_ideals().size(); ++i) {
      if (f.at(i) == lam) inter &= s.ideal(i).members;
    }
    if (!is_dual_ideal(l, inter)) {
      AxiomReport r;
      r.holds = false;
      for (std::size_t i = 0; i < s.dual_ideals().size(); ++i) {
        if (f.at(i) == lam) r.ideals.push_back(i);
      }
      r.detail = "minimal preimage is not a dual ideal";
      throw CheckFailure("reconstruction refused: minimal preimage",
                         witness_json(s, "minimal_preimage", r));
    }
    bps.push_back({lam, l.meet(inter)});
  }
  SpectralFamily e(s.lattice_ptr(), bps);
  if (observable_from_spectral(e, f.space_ptr()).values() != f.values()) {
    throw ConsistencyError("reconstructed family does not reproduce f");
  }
  return e;
}

IncreasingFunction r_from_f(const ObservableFunction& f) {
  const auto& l = f.lattice();
  IncreasingFunction r{f.space().lattice_ptr(), std::vector<double>(l.size(), NAN)};
  for (ElementId p = 0; p < l.size(); ++p) {
    if (p != l.zero()) r.values[p] = f.at_principal(p);
  }
  return r;
}

double f_from_r(const IncreasingFunction& r, const DualIdeal& j) {
  if (j.members.empty()) throw PreconditionError("infimum over an empty dual ideal");
  double out = INFINITY;
  j.members.for_each([&](ElementId p) { out = std::min(out, r.at(p)); });
  return out;
}

ObservableFunction f_from_r(const IncreasingFunction& r, const StonePtr& space) {
  std::vector<double> vals;
  for (const auto& j : space->dual_ideals()) vals.push_back(f_from_r(r, j));
  return ObservableFunction(space, std::move(vals));
}

AxiomReport check_completely_increasing(const IncreasingFunction& r, std::size_t exhaustive_limit) {
  const auto& l = *r.lattice;
  if (r.values.size() != l.size()) throw InputError("increasing function table has wrong size");
  std::vector<ElementId> nz;
  for (ElementId p = 0; p < l.size(); ++p) {
    if (p != l.zero()) nz.push_back(p);
  }
  AxiomReport rep;
  auto fail = [&](std::vector<ElementId> fam, ElementId j, double sup) {
    rep.holds = false;
    rep.elements = std::move(fam);
    std::ostringstream os;
    os << "r(" << l.name(j) << ") = " << r.at(j) << " but sup = " << sup;
    rep.detail = os.str();
  };
  if (nz.size() <= exhaustive_limit && nz.size() < 63) {
    const std::uint64_t limit = std::uint64_t{1} << nz.size();
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
      if ((mask & (mask - 1)) == 0) continue;
      ElementSet fam;
      double sup = -INFINITY;
      for (std::uint64_t b = mask; b != 0; b &= b - 1) {
        ElementId p = nz[static_cast<std::size_t>(std::countr_zero(b))];
        fam.insert(p);
        sup = std::max(sup, r.at(p));
      }
      ElementId j = l.join(fam);
      if (r.at(j) != sup) {
        fail(fam.members(), j, sup);
        return rep;
      }
    }
    return rep;
  }
  for (std::size_t i = 0; i < nz.size(); ++i) {
    for (std::size_t k = i + 1; k < nz.size(); ++k) {
      ElementId j = l.join(nz[i], nz[k]);
      double sup = std::max(r.at(nz[i]), r.at(nz[k]));
      if (r.at(j) != sup) {
        fail({nz[i], nz[k]}, j, sup);
        return rep;
      }
    }
  }
  return rep;
}

ObservabilityReport observability_criterion(const StonePtr& space, const std::vector<double>& g) {
  const auto& l = space->lattice();
  const auto& qs = space->quasipoints();
  if (g.size() != qs.size()) throw InputError("quasipoint table has wrong size");
  ObservabilityReport rep;
  rep.r = IncreasingFunction{space->lattice_ptr(), std::vector<double>(l.size(), NAN)};
  for (ElementId p = 0; p < l.size(); ++p) {
    if (p == l.zero()) continue;
    double mx = -INFINITY;
    for (std::size_t k = 0; k < qs.size(); ++k) {
      if (space->ideal(qs[k]).contains(p)) mx = std::max(mx, g[k]);
    }
    rep.r.values[p] = mx;
  }
  rep.check = check_completely_increasing(rep.r);
  rep.observable = rep.check.holds;
  auto fr = f_from_r(rep.r, space);
  rep.restriction_agrees = true;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    if (fr.at(qs[k]) != g[k]) rep.restriction_agrees = false;
  }
  if (rep.observable) rep.family = reconstruct(fr);
  return rep;
}

ObservableFunction restrict_observable(const ObservableFunction& f, const Sublattice& sub,
                                       const StonePtr& sub_space) {
  if (sub.parent.get() != &f.lattice()) throw PreconditionError("sublattice of another lattice");
  if (sub_space->lattice_ptr() != sub.lattice) throw PreconditionError("space of another sublattice");
  std::vector<double> vals;
  for (const auto& j : sub_space->dual_ideals()) {
    ElementSet in_parent;
    j.members.for_each([&](ElementId e) { in_parent.insert(sub.to_parent(e)); });
    vals.push_back(f.at(cone(f.lattice(), in_parent)));
  }
  return ObservableFunction(sub_space, std::move(vals));
}

}  // namespace obsfn
