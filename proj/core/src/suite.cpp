#include "obsfn/suite.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <span>
#include <sstream>

#include <json.hpp>

#include "obsfn/context.hpp"
#include "obsfn/corpus.hpp"
#include "obsfn/error.hpp"
#include "obsfn/io.hpp"
#include "obsfn/observable.hpp"
#include "obsfn/presheaf.hpp"
#include "obsfn/sampling.hpp"
#include "obsfn/topology.hpp"
#include "obsfn/vn.hpp"

namespace obsfn::suite {

using nlohmann::ordered_json;

namespace {

std::mt19937_64 rng_for(const Config& cfg, int id) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

// The lattices random families are drawn from: 2^1..2^4, chains up to 6
// elements, MO2, MO3 and the two products.
std::vector<corpus::Entry> family_lattices() {
  std::vector<corpus::Entry> out;
  for (auto& e : corpus::standard())
    if (e.name != "O6") out.push_back(std::move(e));
  return out;
}

StonePtr space_of(const LatticePtr& l) { return std::make_shared<const StoneSpectrum>(l); }

ordered_json family_witness(const SpectralFamily& e, const std::string& entry) {
  return ordered_json::parse(io::family_json(e, corpus_file(entry)));
}

ordered_json table_witness(const ObservableFunction& f, const std::string& entry) {
  return ordered_json::parse(io::table_json(f, corpus_file(entry)));
}

ordered_json matrix_witness(const CMatrix& m) { return ordered_json::parse(io::matrix_json(m)); }

std::string fmt(double x) {
  std::ostringstream ss;
  ss << x;
  return ss.str();
}

// ---- 1 -------------------------------------------------------------------

Result round_trip(const Config& cfg) {
  auto rng = rng_for(cfg, 1);
  Result r;
  std::size_t families = 0, failures = 0, collisions = 0;
  for (const auto& entry : family_lattices()) {
    auto space = space_of(entry.lattice);
    std::map<std::vector<double>, SpectralFamily> seen;
    for (int k = 0; k < 40; ++k) {
      auto e = random_family(entry.lattice, rng);
      ++families;
      auto f = observable_from_spectral(e, space);
      std::string why;
      try {
        auto back = reconstruct(f);
        if (!(back == e)) why = "reconstruction differs";
        else if (observable_from_spectral(back, space).values() != f.values()) why = "table differs";
      } catch (const CheckFailure& ex) {
        why = ex.what();
      }
      auto [it, fresh] = seen.emplace(f.values(), e);
      if (!fresh) {
        ++collisions;
        if (!(it->second == e)) why = "two families share a table";
      }
      if (!why.empty()) {
        if (failures++ == 0) {
          ordered_json w;
          w["lattice"] = entry.name;
          w["reason"] = why;
          w["family"] = family_witness(e, entry.name);
          r.witness = w.dump();
        }
      }
    }
  }
  r.pass = failures == 0 && families >= 500;
  r.summary = std::to_string(families) + " families, " + std::to_string(failures) + " failures, " +
              std::to_string(collisions) + " repeated tables all from equal families";
  return r;
}

// ---- 2 -------------------------------------------------------------------

Result axiom_soundness(const Config& cfg) {
  auto rng = rng_for(cfg, 2);
  Result r;
  auto lattices = family_lattices();
  std::size_t built = 0, built_bad = 0;
  std::size_t valid = 0, rejected = 0, silent = 0, perturbed = 0;
  auto note = [&](const std::string& why, const ObservableFunction& g, const std::string& entry) {
    if (!r.witness.empty()) return;
    ordered_json w;
    w["lattice"] = entry;
    w["reason"] = why;
    w["table"] = table_witness(g, entry);
    r.witness = w.dump();
  };
  std::vector<StonePtr> spaces;
  for (const auto& e : lattices) spaces.push_back(space_of(e.lattice));

  for (std::size_t li = 0; li < lattices.size(); ++li) {
    for (int k = 0; k < 30; ++k) {
      auto f = observable_from_spectral(random_family(lattices[li].lattice, rng), spaces[li]);
      ++built;
      if (!check_intersection_condition(f).holds || !check_upper_semicontinuous(f).holds) {
        ++built_bad;
        note("spectral-built table rejected", f, lattices[li].name);
      }
    }
  }

  std::uniform_int_distribution<int> half(-21, 21);
  for (int k = 0; k < 260; ++k) {
    const std::size_t li = static_cast<std::size_t>(k) % lattices.size();
    const auto& l = lattices[li].lattice;
    auto f = observable_from_spectral(random_family(l, rng), spaces[li]);
    std::vector<ElementId> nonzero;
    for (ElementId p = 0; p < l->size(); ++p)
      if (p != l->zero()) nonzero.push_back(p);
    ElementId p = nonzero[std::uniform_int_distribution<std::size_t>(0, nonzero.size() - 1)(rng)];
    auto vals = f.values();
    const std::size_t idx = spaces[li]->principal_index(p);
    auto image = f.image();
    double v = vals[idx];
    while (v == vals[idx]) {
      v = std::bernoulli_distribution(0.5)(rng)
              ? image[std::uniform_int_distribution<std::size_t>(0, image.size() - 1)(rng)]
              : half(rng) / 2.0;
    }
    vals[idx] = v;
    ObservableFunction g(spaces[li], vals);
    ++perturbed;
    auto ic = check_intersection_condition(g);
    auto us = check_upper_semicontinuous(g);
    if (ic.holds && us.holds) {
      try {
        auto e = reconstruct(g);
        if (observable_from_spectral(e, spaces[li]).values() == g.values()) {
          ++valid;
        } else {
          ++silent;
          note("valid table reconstructs to a different table", g, lattices[li].name);
        }
      } catch (const CheckFailure&) {
        ++silent;
        note("valid table not reconstructible", g, lattices[li].name);
      }
      continue;
    }
    const auto& bad = ic.holds ? us : ic;
    bool named = !bad.ideals.empty() || !bad.elements.empty();
    bool thrown = false;
    try {
      reconstruct(g);
    } catch (const CheckFailure& ex) {
      thrown = !ex.witness().empty();
    }
    if (named && thrown) {
      ++rejected;
    } else {
      ++silent;
      note("invalid table without a witness", g, lattices[li].name);
    }
  }
  r.pass = built_bad == 0 && silent == 0 && perturbed >= 100;
  r.summary = std::to_string(built) + " spectral tables pass both axioms (" + std::to_string(built_bad) +
              " rejected); " + std::to_string(perturbed) + " perturbed: " + std::to_string(valid) +
              " still valid and reconstructed, " + std::to_string(rejected) + " rejected with witness, " +
              std::to_string(silent) + " silent";
  return r;
}

// ---- 3 -------------------------------------------------------------------

Result spectrum_identity(const Config& cfg) {
  auto rng = rng_for(cfg, 3);
  Result r;
  std::size_t families = 0, failures = 0;
  std::vector<std::string> failing;
  for (const auto& entry : family_lattices()) {
    auto space = space_of(entry.lattice);
    std::size_t here = 0;
    for (int k = 0; k < 40; ++k) {
      auto e = random_family(entry.lattice, rng);
      ++families;
      std::set<double> image;
      for (auto q : space->quasipoints()) image.insert(observable_from_spectral(e, space->ideal(q)));
      if (image == e.spectrum()) continue;
      ++failures;
      if (here++ == 0) failing.push_back(entry.name + (is_atomistic(*entry.lattice) ? "" : " (not atomistic)"));
      if (r.witness.empty()) {
        ordered_json w;
        w["lattice"] = entry.name;
        w["family"] = family_witness(e, entry.name);
        w["image_on_quasipoints"] = std::vector<double>(image.begin(), image.end());
        auto sp = e.spectrum();
        w["spectrum"] = std::vector<double>(sp.begin(), sp.end());
        r.witness = w.dump();
      }
    }
  }
  r.pass = failures == 0;
  r.summary = std::to_string(families) + " families, " + std::to_string(failures) + " mismatches";
  if (!failing.empty()) {
    r.summary += " on";
    for (std::size_t i = 0; i < failing.size(); ++i) r.summary += (i ? ", " : " ") + failing[i];
  }
  return r;
}

// ---- 4 -------------------------------------------------------------------

bool same_r(const IncreasingFunction& a, const IncreasingFunction& b) {
  for (ElementId p = 0; p < a.values.size(); ++p) {
    if (p == a.lattice->zero()) continue;
    if (a.values[p] != b.values[p]) return false;
  }
  return true;
}

Result bijection(const Config& cfg) {
  auto rng = rng_for(cfg, 4);
  Result r;
  std::size_t f_trips = 0, r_trips = 0, failures = 0, tables = 0, table_failures = 0;
  auto note = [&](const std::string& why, const std::string& entry) {
    if (failures + table_failures == 1) {
      ordered_json w;
      w["lattice"] = entry;
      w["reason"] = why;
      r.witness = w.dump();
    }
  };
  for (const auto& entry : family_lattices()) {
    auto space = space_of(entry.lattice);
    for (int k = 0; k < 20; ++k) {
      auto f = observable_from_spectral(random_family(entry.lattice, rng), space);
      auto rf = r_from_f(f);
      ++f_trips;
      if (f_from_r(rf, space).values() != f.values()) {
        ++failures;
        note("f -> r_f -> f changed the table", entry.name);
      }
      ++r_trips;
      if (!check_completely_increasing(rf).holds || !same_r(r_from_f(f_from_r(rf, space)), rf)) {
        ++failures;
        note("r -> f_r -> r changed the function", entry.name);
      }
    }
  }
  // completely increasing functions on Boolean lattices from random atom values
  for (std::size_t n = 1; n <= 4; ++n) {
    auto l = corpus::boolean(n);
    auto space = space_of(l);
    std::uniform_int_distribution<int> half(-10, 10);
    for (int k = 0; k < 25; ++k) {
      std::vector<double> atom(n);
      for (auto& a : atom) a = half(rng) / 2.0;
      IncreasingFunction rr{l, std::vector<double>(l->size(), std::numeric_limits<double>::quiet_NaN())};
      for (std::uint64_t m = 1; m < l->size(); ++m) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
          if ((m >> i) & 1U) mx = std::max(mx, atom[i]);
        rr.values[m] = mx;
      }
      ++r_trips;
      if (!check_completely_increasing(rr).holds || !same_r(r_from_f(f_from_r(rr, space)), rr)) {
        ++failures;
        note("r -> f_r -> r changed an atom-generated function", "2^" + std::to_string(n));
      }
    }
  }
  // every bounded quasipoint table on a Boolean lattice passes the criterion
  for (std::size_t n = 1; n <= 4; ++n) {
    auto space = space_of(corpus::boolean(n));
    const std::size_t q = space->quasipoints().size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < q; ++i) total *= 3;
    std::vector<std::vector<double>> gs;
    if (n <= 3) {
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<double> g;
        for (std::size_t c = code, i = 0; i < q; ++i, c /= 3) g.push_back(static_cast<double>(c % 3) / 2.0);
        gs.push_back(g);
      }
    } else {
      std::uniform_int_distribution<int> half(-10, 10);
      for (int k = 0; k < 100; ++k) {
        std::vector<double> g(q);
        for (auto& x : g) x = half(rng) / 2.0;
        gs.push_back(g);
      }
    }
    for (const auto& g : gs) {
      ++tables;
      auto rep = observability_criterion(space, g);
      if (!rep.observable || !rep.restriction_agrees) {
        ++table_failures;
        note("Boolean quasipoint table rejected", "2^" + std::to_string(n));
      }
    }
  }
  // the MO2 fixture: 1 on H_a, 1.5 on H_b, 2 elsewhere
  auto mo2 = corpus::mo(2);
  auto space = space_of(mo2);
  std::vector<double> g;
  for (auto q : space->quasipoints()) {
    const auto& j = space->ideal(q);
    g.push_back(j.contains(mo2->id("a")) ? 1.0 : j.contains(mo2->id("b")) ? 1.5 : 2.0);
  }
  auto rep = observability_criterion(space, g);
  bool fixture_fails = !rep.observable && !rep.check.elements.empty();
  std::string pair;
  for (auto e : rep.check.elements) pair += (pair.empty() ? "" : ",") + mo2->name(e);
  r.pass = failures == 0 && table_failures == 0 && fixture_fails;
  r.summary = std::to_string(f_trips) + " f->r->f and " + std::to_string(r_trips) + " r->f->r trips, " +
              std::to_string(failures) + " failures; " + std::to_string(tables) + " Boolean quasipoint tables, " +
              std::to_string(table_failures) + " rejected; MO2 fixture " +
              (fixture_fails ? "rejected at (" + pair + ")" : "accepted");
  if (!fixture_fails && r.witness.empty()) r.witness = R"({"lattice":"MO2","reason":"fixture accepted"})";
  return r;
}

// ---- 5 -------------------------------------------------------------------

Result matrix_side(const Config& cfg) {
  auto rng = rng_for(cfg, 5);
  const Tolerances& tol = cfg.tol;
  Result r;
  std::vector<std::string> bad;
  auto fail = [&](const std::string& what, const ordered_json& w) {
    bad.push_back(what);
    if (r.witness.empty()) {
      ordered_json o;
      o["part"] = what;
      o["data"] = w;
      r.witness = o.dump();
    }
  };

  double worst_residual = 0;
  for (int k = 0; k < 200; ++k) {
    std::size_t n = 2 + static_cast<std::size_t>(k) % 7;
    auto a = random_hermitian(n, rng);
    auto e = eigen_hermitian(a, tol);
    CMatrix rec(n, n);
    for (std::size_t c = 0; c < n; ++c) rec += CMatrix::outer(e.vectors.col(c)) * cplx(e.values[c]);
    double res = distance(rec, a);
    worst_residual = std::max(worst_residual, res);
    if (!(res < 1e-9)) fail("jacobi residual", matrix_witness(a));
  }

  std::size_t order_pairs = 0, contained = 0;
  for (int k = 0; k < 200; ++k) {
    std::size_t n = 2 + static_cast<std::size_t>(k) % 3;
    std::size_t rq = 1 + static_cast<std::size_t>(k / 3) % n;
    auto q = random_projection(n, rq, rng);
    CMatrix p;
    if (k % 2 == 0) {
      // a random subspace of ran Q
      auto basis = range_basis(q, tol);
      std::size_t rp = 1 + static_cast<std::size_t>(k / 2) % basis.cols();
      CMatrix mix(basis.cols(), rp);
      std::normal_distribution<double> g;
      for (std::size_t i = 0; i < mix.rows(); ++i)
        for (std::size_t j = 0; j < rp; ++j) mix(i, j) = cplx(g(rng), g(rng));
      p = projector_onto(basis * mix, tol);
    } else {
      p = random_projection(n, 1 + static_cast<std::size_t>(k / 2) % n, rng);
    }
    ++order_pairs;
    bool inside = projection_rank(proj_join(p, q, tol)) == projection_rank(q);
    contained += inside ? 1 : 0;
    if (spectral_leq(p, q, tol) != inside) {
      ordered_json w;
      w["P"] = matrix_witness(p);
      w["Q"] = matrix_witness(q);
      fail("spectral order vs containment", w);
    }
  }

  std::size_t lattice_ops = 0;
  for (int k = 0; k < 100; ++k) {
    std::size_t n = 2 + static_cast<std::size_t>(k) % 5;
    std::size_t count = 2 + static_cast<std::size_t>(k) % 2;
    std::uniform_real_distribution<double> u(-3, 3);
    std::vector<CMatrix> ops;
    std::vector<double> lo(n, std::numeric_limits<double>::infinity()), hi(n, -lo[0]);
    for (std::size_t c = 0; c < count; ++c) {
      std::vector<double> d(n);
      for (std::size_t i = 0; i < n; ++i) {
        d[i] = k % 4 == 0 ? std::round(u(rng)) : u(rng);
        lo[i] = std::min(lo[i], d[i]);
        hi[i] = std::max(hi[i], d[i]);
      }
      ops.push_back(CMatrix::diagonal(d));
    }
    ++lattice_ops;
    if (distance(spectral_meet(ops, tol), CMatrix::diagonal(lo)) > 1e-9 ||
        distance(spectral_join(ops, tol), CMatrix::diagonal(hi)) > 1e-9) {
      ordered_json w = ordered_json::array();
      for (const auto& o : ops) w.push_back(matrix_witness(o));
      fail("meet/join of diagonals", w);
    }
  }

  std::size_t pp7 = 0;
  double worst_pp7 = 0;
  for (int k = 0; k < 100; ++k) {
    std::size_t n = 2 + static_cast<std::size_t>(k) % 3;
    VNSubalgebra m = [&] {
      switch (k % 4) {
        case 0: return VNSubalgebra::generated_by(n, {random_hermitian(n, rng)}, tol);
        case 1: return VNSubalgebra::generated_by(n, {random_projection(n, 1, rng)}, tol);
        case 2: {
          std::vector<double> d(n, 0.0);
          d[0] = 1;
          return VNSubalgebra::generated_by(n, {CMatrix::diagonal(d)}, tol);
        }
        default:
          return VNSubalgebra::generated_by(n, {random_hermitian(n, rng), random_hermitian(n, rng)}, tol);
      }
    }();
    auto q = random_projection(n, 1 + static_cast<std::size_t>(k / 4) % (n - 1), rng);
    ++pp7;
    double gap = distance(rho_restrict(m, q), support(m, q));
    worst_pp7 = std::max(worst_pp7, gap);
    if (!(gap <= tol.rec)) {
      ordered_json w;
      w["generators"] = ordered_json::array();
      for (const auto& g : m.generators()) w["generators"].push_back(matrix_witness(g));
      w["Q"] = matrix_witness(q);
      fail("rho Q = support Q", w);
    }
  }

  std::size_t scalar = 0;
  for (int k = 0; k < 50; ++k) {
    std::size_t n = 2 + static_cast<std::size_t>(k) % 5;
    auto ci = VNSubalgebra::generated_by(n, {}, tol);
    auto a = random_hermitian(n, rng);
    auto e = eigen_hermitian(a, tol);
    auto id = CMatrix::identity(n);
    ++scalar;
    if (distance(rho_restrict(ci, a), id * cplx(e.values.back())) > 1e-9 ||
        distance(sigma_restrict(ci, a), id * cplx(e.values.front())) > 1e-9)
      fail("restriction to CI", matrix_witness(a));
  }

  r.pass = bad.empty();
  std::ostringstream ss;
  ss << "200 Jacobi (worst residual " << worst_residual << "), " << order_pairs << " order pairs (" << contained
     << " contained), " << lattice_ops << " diagonal meet/join, " << pp7 << " (M,Q) pairs (worst gap " << worst_pp7
     << "), " << scalar << " CI restrictions; " << bad.size() << " failures";
  r.summary = ss.str();
  return r;
}

// ---- 6 -------------------------------------------------------------------

Result gelfand(const Config& cfg) {
  auto rng = rng_for(cfg, 6);
  const Tolerances& tol = cfg.tol;
  Result r;
  std::size_t cases = 0, values = 0, failures = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<CMatrix> units;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> d(n, 0.0);
      d[i] = 1;
      units.push_back(CMatrix::diagonal(d));
    }
    auto diagram = ContextDiagram::build(n, {{"D", units}}, tol);
    const std::size_t ci = diagram.index("D");
    const Context& ctx = diagram.context(ci);
    auto space = space_of(ctx.lattice);
    std::vector<std::uint64_t> unit_mask;
    for (const auto& u : units) unit_mask.push_back(ctx.find(u, tol).value());

    for (int k = 0; k < 20; ++k) {
      std::vector<double> d(n);
      std::uniform_int_distribution<int> half(-6, 6);
      std::uniform_real_distribution<double> u(-5, 5);
      for (auto& x : d) x = k % 2 == 0 ? half(rng) / 2.0 : u(rng);
      auto a = CMatrix::diagonal(d);
      ++cases;
      // lattice side: the spectral family of A inside the context's Boolean lattice
      auto fam = spectral_family_of(a, tol);
      std::vector<Breakpoint> bps;
      for (std::size_t i = 0; i < fam.lambdas.size(); ++i)
        bps.push_back({fam.lambdas[i], static_cast<ElementId>(ctx.find(fam.projections[i], tol).value())});
      SpectralFamily e(ctx.lattice, bps);
      // operator side: r_A on the context
      auto section = section_from_operator(a, diagram);
      for (std::size_t i = 0; i < n; ++i) {
        ++values;
        double f = observable_from_spectral(e, space->ideal(space->principal_index(unit_mask[i])));
        double rv = section.tables[ci][unit_mask[i]];
        if (f != d[i] || rv != d[i]) {
          if (failures++ == 0) {
            ordered_json w;
            w["A"] = matrix_witness(a);
            w["index"] = i;
            w["f"] = f;
            w["r"] = rv;
            r.witness = w.dump();
          }
        }
      }
    }
  }
  r.pass = failures == 0;
  r.summary = std::to_string(cases) + " diagonal operators in dims 2-6, " + std::to_string(values) +
              " quasipoint values, " + std::to_string(failures) + " mismatches";
  return r;
}

// ---- 7 -------------------------------------------------------------------

Result classical(const Config& /*cfg*/) {
  Result r;
  std::size_t spaces = 0, functions = 0, continuous = 0, failures = 0;
  auto note = [&](const std::string& why, const FiniteTopSpace& s, const std::vector<double>& f) {
    if (failures++ > 0) return;
    ordered_json w;
    w["reason"] = why;
    w["space"] = ordered_json::parse(io::space_json(s));
    ordered_json vals = ordered_json::object();
    for (std::size_t x = 0; x < f.size(); ++x) vals[s.name(x)] = f[x];
    w["values"] = vals;
    r.witness = w.dump();
  };
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& s : FiniteTopSpace::all_topologies(n)) {
      ++spaces;
      std::size_t total = 1;
      for (std::size_t i = 0; i < n; ++i) total *= n;
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<double> f;
        for (std::size_t c = code, i = 0; i < n; ++i, c /= n) f.push_back(static_cast<double>(c % n));
        ++functions;
        if (!is_continuous_function(s, f)) continue;
        ++continuous;
        auto sigma = sigma_from_function(s, f);
        if (sigma.admissible_domain() != s.all()) {
          note("admissible domain is not M", s, f);
          continue;
        }
        if (!is_continuous_family(sigma).continuous) note("sigma_f not continuous", s, f);
        std::vector<double> back;
        for (std::size_t x = 0; x < n; ++x) back.push_back(sigma.induced_function(x));
        if (back != f) note("f_sigma differs from f", s, f);
        else if (!(sigma_from_function(s, back) == sigma)) note("sigma of f_sigma differs", s, f);
      }
    }
  }

  auto grid = CellGrid::parse("-2:2:0.25");
  std::size_t points = 0, grid_bad = 0;
  std::string counts;
  for (const std::string name : {"id", "abs", "ln", "step"}) {
    auto fam = grid_family(grid, name);
    auto g = sample_induced(grid, fam);
    counts += (counts.empty() ? "" : ", ") + name + " " + std::to_string(g.points.size());
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      ++points;
      double t = grid_target(name, g.points[i]);
      if (std::abs(g.values[i] - t) > 2 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        if (grid_bad++ == 0 && r.witness.empty()) {
          ordered_json w;
          w["family"] = name;
          w["x"] = g.points[i];
          w["induced"] = g.values[i];
          w["target"] = t;
          r.witness = w.dump();
        }
      }
    }
  }
  auto step = is_continuous_family(grid_family(grid, "step"), grid.step);
  std::string step_text = step.continuous ? "continuous" : "not continuous";
  if (step.witness) step_text += " at (" + fmt(step.witness->first) + ", " + fmt(step.witness->second) + ")";
  bool step_ok = !step.continuous && step.witness.has_value();
  if (!step_ok && r.witness.empty()) r.witness = R"({"family":"step","reason":"no discontinuity found"})";

  r.pass = failures == 0 && grid_bad == 0 && step_ok;
  r.summary = std::to_string(spaces) + " topologies, " + std::to_string(continuous) + " of " +
              std::to_string(functions) + " functions continuous, " + std::to_string(failures) +
              " round-trip failures; grid -2:2:0.25 (" + counts + " points), " + std::to_string(grid_bad) +
              " off target; sigma_step " + step_text;
  return r;
}

// ---- 8 -------------------------------------------------------------------

Result contextual(const Config& cfg) {
  auto rng = rng_for(cfg, 8);
  const Tolerances& tol = cfg.tol;
  Result r;
  CMatrix pz = CMatrix::diagonal({1, 0});
  CMatrix px(2, 2);
  px(0, 0) = px(0, 1) = px(1, 0) = px(1, 1) = 0.5;
  auto d = ContextDiagram::build(2, {{"Az", {pz}}, {"Ax", {px}}}, tol);
  const auto id = CMatrix::identity(2);

  GlobalSection s;
  s.tables.resize(d.contexts().size());
  auto table = [&](const std::string& name, const CMatrix& p, double vp, double vq) {
    const auto& c = d.context(d.index(name));
    std::vector<double> t(4, std::numeric_limits<double>::quiet_NaN());
    t[c.find(p, tol).value()] = vp;
    t[c.find(id - p, tol).value()] = vq;
    t[3] = std::max(vp, vq);
    s.tables[d.index(name)] = t;
  };
  table("Az", pz, 1.0, 2.0);
  table("Ax", px, 1.5, 2.0);
  fill_restrictions(s, d);

  bool accepted = is_global_section(s, d).holds;
  auto g = glue_section(s, d);
  bool noncommuting = false;
  if (g.increasing_witness.size() == 2) {
    const auto& p = g.values[g.increasing_witness[0]].projection;
    const auto& q = g.values[g.increasing_witness[1]].projection;
    noncommuting = (p * q - q * p).frobenius() > 1e-9;
  }
  bool fixture_ok = accepted && !g.completely_increasing && noncommuting && !g.extendable;

  std::size_t trips = 0, trip_failures = 0;
  for (int k = 0; k < 100; ++k) {
    auto a = random_hermitian(2, rng);
    auto sec = section_from_operator(a, d);
    ++trips;
    bool ok = is_global_section(sec, d).holds;
    if (ok) {
      auto gl = glue_section(sec, d);
      ok = gl.extendable && gl.completely_increasing && gl.op.has_value();
      if (ok) {
        auto again = section_from_operator(*gl.op, d);
        for (std::size_t i = 0; ok && i < sec.tables.size(); ++i)
          for (std::size_t m = 1; ok && m < sec.tables[i].size(); ++m)
            ok = same_value(again.tables[i][m], sec.tables[i][m], tol);
      }
    }
    if (!ok && trip_failures++ == 0) {
      ordered_json w;
      w["reason"] = "operator section does not round-trip";
      w["A"] = matrix_witness(a);
      r.witness = w.dump();
    }
  }
  if (!fixture_ok && r.witness.empty()) {
    ordered_json w;
    w["reason"] = "fixture section";
    w["accepted"] = accepted;
    w["completely_increasing"] = g.completely_increasing;
    w["extendable"] = g.extendable;
    r.witness = w.dump();
  }
  std::string pair;
  for (auto i : g.increasing_witness) pair += (pair.empty() ? "" : ", ") + fmt(g.values[i].value);
  r.pass = fixture_ok && trip_failures == 0;
  r.summary = std::string("dim-2 fixture: global section ") + (accepted ? "yes" : "no") +
              ", increasing fails on noncommuting pair with values (" + pair + ")" +
              (noncommuting ? "" : " [pair commutes]") + ", extendable " + (g.extendable ? "yes" : "no") + "; " +
              std::to_string(trips) + " operator sections, " + std::to_string(trip_failures) +
              " round-trip failures";
  return r;
}

// ---- 9 -------------------------------------------------------------------

bool compatible(const FinitePresheaf& s, const SheafWitness& w) {
  const auto& l = s.lattice();
  for (std::size_t i = 0; i < w.cover.size(); ++i)
    for (std::size_t j = i + 1; j < w.cover.size(); ++j) {
      ElementId m = l.meet(w.cover[i], w.cover[j]);
      if (s.restrict(m, w.cover[i], w.family[i]) != s.restrict(m, w.cover[j], w.family[j])) return false;
    }
  return true;
}

std::size_t gluings(const FinitePresheaf& s, const SheafWitness& w) {
  std::size_t out = 0;
  for (std::size_t x = 0; x < s.size(w.element); ++x) {
    bool ok = true;
    for (std::size_t i = 0; ok && i < w.cover.size(); ++i)
      ok = s.restrict(w.cover[i], w.element, x) == w.family[i];
    out += ok ? 1 : 0;
  }
  return out;
}

Result sheaf_echo(const Config& /*cfg*/) {
  Result r;
  auto mo2 = corpus::mo(2);
  auto s = spectral_presheaf(mo2, {1.0, 2.0});
  auto rep = check_sheaf_condition(s);
  bool mo2_ok = false;
  ordered_json found;
  if (!rep.holds && rep.existence_witness) {
    const auto& w = *rep.existence_witness;
    std::vector<ElementId> cover = w.cover;
    mo2_ok = mo2->join(std::span<const ElementId>(cover)) == w.element && compatible(s, w) && gluings(s, w) == 0;
    found["element"] = mo2->name(w.element);
    found["cover"] = ordered_json::array();
    found["family"] = ordered_json::array();
    for (std::size_t i = 0; i < w.cover.size(); ++i) {
      found["cover"].push_back(mo2->name(w.cover[i]));
      found["family"].push_back(s.labels(w.cover[i])[w.family[i]]);
    }
    found["gluings"] = gluings(s, w);
  }

  std::size_t spaces = 0, failing = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& sp : FiniteTopSpace::all_topologies(n)) {
      ++spaces;
      auto fp = function_presheaf(sp, {"0", "1"});
      if (!check_sheaf_condition(fp).holds && failing++ == 0) {
        ordered_json w;
        w["reason"] = "function presheaf fails";
        w["space"] = ordered_json::parse(io::space_json(sp));
        r.witness = w.dump();
      }
    }
  }
  if (!mo2_ok && r.witness.empty()) r.witness = R"({"reason":"MO2 spectral presheaf passes"})";
  r.pass = mo2_ok && failing == 0;
  r.summary = "MO2 spectral presheaf " + std::string(mo2_ok ? "fails" : "passes") + " with " + found.dump() +
              "; function presheaves on " + std::to_string(spaces) + " topologies, " + std::to_string(failing) +
              " failing";
  return r;
}

}  // namespace

const std::vector<int>& manifest() {
  static const std::vector<int> ids{1, 2, 3, 4, 5, 6, 7, 8, 9};
  return ids;
}

std::string title(int id) {
  switch (id) {
    case 1: return "round-trip reconstruction";
    case 2: return "axiom soundness";
    case 3: return "spectrum identity";
    case 4: return "bijection r <-> f";
    case 5: return "matrix side";
    case 6: return "finite Gelfand correspondence";
    case 7: return "classical dictionary";
    case 8: return "contextual observables";
    case 9: return "sheaf obstruction";
    default: throw InputError("unknown criterion " + std::to_string(id));
  }
}

Result run(int id, const Config& cfg) {
  Result r;
  try {
    switch (id) {
      case 1: r = round_trip(cfg); break;
      case 2: r = axiom_soundness(cfg); break;
      case 3: r = spectrum_identity(cfg); break;
      case 4: r = bijection(cfg); break;
      case 5: r = matrix_side(cfg); break;
      case 6: r = gelfand(cfg); break;
      case 7: r = classical(cfg); break;
      case 8: r = contextual(cfg); break;
      case 9: r = sheaf_echo(cfg); break;
      default: throw InputError("unknown criterion " + std::to_string(id));
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    r.pass = false;
    r.summary = std::string("aborted: ") + e.what();
    ordered_json w;
    w["exception"] = e.what();
    r.witness = w.dump();
  }
  r.id = id;
  r.title = title(id);
  return r;
}

std::vector<Result> run_all(const Config& cfg, std::vector<int> ids) {
  if (ids.empty()) ids = manifest();
  std::vector<int> ordered;
  for (int id : manifest())
    if (std::find(ids.begin(), ids.end(), id) != ids.end()) ordered.push_back(id);
  for (int id : ids) title(id);
  std::vector<Result> out;
  if (!cfg.parallel) {
    for (int id : ordered) out.push_back(run(id, cfg));
    return out;
  }
  std::vector<std::future<Result>> jobs;
  for (int id : ordered) jobs.push_back(std::async(std::launch::async, [id, &cfg] { return run(id, cfg); }));
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

std::string corpus_file(const std::string& entry_name) {
  std::string out;
  for (std::size_t i = 0; i < entry_name.size(); ++i) {
    char c = entry_name[i];
    if (c == '2' && i + 1 < entry_name.size() && entry_name[i + 1] == '^') {
      out += "boolean";
      ++i;
    } else {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out + ".json";
}

}  // namespace obsfn::suite
