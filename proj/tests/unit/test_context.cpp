#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "obsfn/context.hpp"
#include "obsfn/corpus.hpp"
#include "obsfn/error.hpp"
#include "obsfn/observable.hpp"
#include "obsfn/sampling.hpp"

using namespace obsfn;

namespace {

CMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  CMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

const CMatrix kPz = real_matrix({{1, 0}, {0, 0}});
const CMatrix kPx = real_matrix({{0.5, 0.5}, {0.5, 0.5}});
const CMatrix kPy = [] {
  CMatrix m(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = 0.5;
  m(0, 1) = cplx(0, -0.5);
  m(1, 0) = cplx(0, 0.5);
  return m;
}();

ContextDiagram zx() { return ContextDiagram::build(2, {{"Az", {kPz}}, {"Ax", {kPx}}}); }

std::uint64_t mask_of(const Context& c, const CMatrix& p) {
  auto m = c.find(p);
  REQUIRE(m);
  return *m;
}

CMatrix line(const std::vector<double>& v) {
  double n = 0;
  for (double x : v) n += x * x;
  std::vector<cplx> w;
  for (double x : v) w.emplace_back(x / std::sqrt(n), 0);
  return CMatrix::outer(w);
}

// dim 3: the diagonal context and a context rotated in the (2,3) plane; they share e1
ContextDiagram shared_line() {
  return ContextDiagram::build(3, {{"D", {line({1, 0, 0}), line({0, 1, 0})}},
                                   {"R", {line({1, 0, 0}), line({0, 1, 1})}}});
}

// Oracle for gs7 (i): commuting families inside `u` whose join is in `u`.
struct Family {
  std::vector<std::size_t> members;
  std::size_t join;
};
std::vector<Family> commuting_families(const std::vector<GluedValue>& u) {
  const std::size_t m = u.size();
  auto locate = [&](const CMatrix& p) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < m; ++k)
      if (proj_equal(u[k].projection, p)) return k;
    return std::nullopt;
  };
  std::vector<Family> out;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << m); ++s) {
    std::vector<std::size_t> mem;
    for (std::size_t k = 0; k < m; ++k)
      if ((s >> k) & 1U) mem.push_back(k);
    if (mem.size() < 2) continue;
    bool comm = true;
    for (auto a : mem)
      for (auto b : mem) {
        CMatrix c = u[a].projection * u[b].projection - u[b].projection * u[a].projection;
        comm = comm && c.frobenius() < 1e-9;
      }
    if (!comm) continue;
    CMatrix j = u[mem[0]].projection;
    for (std::size_t k = 1; k < mem.size(); ++k) j = proj_join(j, u[mem[k]].projection);
    if (auto k = locate(j)) out.push_back({mem, *k});
  }
  return out;
}

// gs7 converse: every function on the diagram's projections with (i) splits
// into a global section; every global section glues back to it.
std::size_t converse_scan(const ContextDiagram& d, const std::vector<double>& values) {
  GlobalSection any = section_from_operator(CMatrix::identity(d.ambient_dim()), d);
  auto u = glue_section(any, d).values;
  auto fams = commuting_families(u);
  std::size_t total = 1;
  for (std::size_t k = 0; k < u.size(); ++k) total *= values.size();
  std::size_t good = 0;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto& g : u) {
      g.value = values[c % values.size()];
      c /= values.size();
    }
    bool ok = true;
    for (const auto& f : fams) {
      double mx = u[f.members[0]].value;
      for (auto k : f.members) mx = std::max(mx, u[k].value);
      if (mx != u[f.join].value) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    ++good;
    auto s = split_function(u, d);
    REQUIRE(is_global_section(s, d).holds);
    auto g = glue_section(s, d);
    CHECK(g.commuting_ok);
    REQUIRE(g.values.size() == u.size());
    for (const auto& v : g.values) {
      auto it = std::find_if(u.begin(), u.end(), [&](const GluedValue& w) { return proj_equal(w.projection, v.projection); });
      REQUIRE(it != u.end());
      CHECK(it->value == v.value);
    }
  }
  return good;
}

}  // namespace

TEST_CASE("diagram construction") {
  auto d = zx();
  REQUIRE(d.contexts().size() == 3);
  auto& ci = d.context(d.index("CI"));
  CHECK(ci.inserted);
  CHECK(ci.atoms() == 1);
  CHECK(d.context(d.index("Az")).atoms() == 2);
  CHECK(d.meet(d.index("Az"), d.index("Ax")) == d.index("CI"));
  CHECK(d.includes(d.index("CI"), d.index("Az")));
  CHECK_FALSE(d.includes(d.index("Az"), d.index("Ax")));
  CHECK_THROWS_AS(ContextDiagram::build(2, {{"bad", {kPz, kPx}}}), InputError);
  CHECK_THROWS_AS(ContextDiagram::build(2, {{"A", {kPz}}, {"A", {kPx}}}), InputError);

  auto s = shared_line();
  // D, R, CI and D&R = span{e1, e1-perp}
  CHECK(s.contexts().size() == 4);
  auto dr = s.meet(s.index("D"), s.index("R"));
  CHECK(s.context(dr).atoms() == 2);
  CHECK(s.context(dr).find(line({1, 0, 0})));
}

TEST_CASE("sections of diag(1,2)") {
  auto d = zx();
  auto s = section_from_operator(CMatrix::diagonal({1, 2}), d);
  const auto& az = d.context(d.index("Az"));
  const auto& ax = d.context(d.index("Ax"));
  const auto& taz = s.tables[d.index("Az")];
  const auto& tax = s.tables[d.index("Ax")];
  CHECK(taz[mask_of(az, kPz)] == 1.0);
  CHECK(taz[mask_of(az, CMatrix::identity(2) - kPz)] == 2.0);
  CHECK(taz[az.full_mask()] == 2.0);
  CHECK(tax[mask_of(ax, kPx)] == doctest::Approx(2.0));
  CHECK(tax[mask_of(ax, CMatrix::identity(2) - kPx)] == doctest::Approx(2.0));
  CHECK(s.tables[d.index("CI")][1] == doctest::Approx(2.0));
  CHECK(is_global_section(s, d).holds);
}

TEST_CASE("constant and projection operators") {
  auto d = zx();
  auto s = section_from_operator(CMatrix::identity(2) * cplx(3.5, 0), d);
  for (const auto& t : s.tables)
    for (std::size_t m = 1; m < t.size(); ++m) CHECK(t[m] == doctest::Approx(3.5));

  // r(Q) = 0 iff Q <= I - P, else 1
  auto p = section_from_operator(kPz, d);
  const auto& az = d.context(d.index("Az"));
  CHECK(p.tables[d.index("Az")][mask_of(az, kPz)] == doctest::Approx(1.0));
  CHECK(p.tables[d.index("Az")][mask_of(az, CMatrix::identity(2) - kPz)] == doctest::Approx(0.0));
  CHECK(p.tables[d.index("Az")][az.full_mask()] == doctest::Approx(1.0));
  const auto& ax = d.context(d.index("Ax"));
  CHECK(p.tables[d.index("Ax")][mask_of(ax, kPx)] == doctest::Approx(1.0));
}

TEST_CASE("global section checks") {
  auto d = zx();
  GlobalSection s;
  s.tables.resize(d.contexts().size());
  const auto& az = d.context(d.index("Az"));
  const auto& ax = d.context(d.index("Ax"));
  std::vector<double> taz(4), tax(4);
  taz[mask_of(az, kPz)] = 1;
  taz[mask_of(az, CMatrix::identity(2) - kPz)] = 2;
  taz[3] = 2;
  tax[mask_of(ax, kPx)] = 1;
  tax[mask_of(ax, CMatrix::identity(2) - kPx)] = 3;
  tax[3] = 3;
  s.tables[d.index("Az")] = taz;
  s.tables[d.index("Ax")] = tax;
  fill_restrictions(s, d);
  auto rep = is_global_section(s, d);
  CHECK_FALSE(rep.holds);
  REQUIRE(rep.contexts);
  CHECK(rep.left != rep.right);

  // a table that is not completely increasing names its context
  GlobalSection bad = section_from_operator(CMatrix::diagonal({1, 2}), d);
  bad.tables[d.index("Ax")][3] = 7;
  try {
    is_global_section(bad, d);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("Ax") != std::string::npos);
  }

  // single context: vacuous
  auto one = ContextDiagram::build(2, {{"Az", {kPz}}});
  GlobalSection t;
  t.tables.resize(one.contexts().size());
  t.tables[one.index("Az")] = {0, 4, 5, 5};
  fill_restrictions(t, one);
  CHECK(is_global_section(t, one).holds);
}

TEST_CASE("the dim-2 non-operator section") {
  auto d = zx();
  GlobalSection s;
  s.tables.resize(d.contexts().size());
  const auto& az = d.context(d.index("Az"));
  const auto& ax = d.context(d.index("Ax"));
  std::vector<double> taz(4), tax(4);
  taz[mask_of(az, kPz)] = 1;
  taz[mask_of(az, CMatrix::identity(2) - kPz)] = 2;
  taz[3] = 2;
  tax[mask_of(ax, kPx)] = 1.5;
  tax[mask_of(ax, CMatrix::identity(2) - kPx)] = 2;
  tax[3] = 2;
  s.tables[d.index("Az")] = taz;
  s.tables[d.index("Ax")] = tax;
  fill_restrictions(s, d);
  CHECK(is_global_section(s, d).holds);
  auto g = glue_section(s, d);
  CHECK(g.values.size() == 5);
  CHECK(g.commuting_ok);
  CHECK(g.commuting_checked > 0);
  CHECK_FALSE(g.completely_increasing);
  REQUIRE(g.increasing_witness.size() == 2);
  std::set<double> wv{g.values[g.increasing_witness[0]].value, g.values[g.increasing_witness[1]].value};
  CHECK(wv == std::set<double>{1.0, 1.5});
  CHECK_FALSE(g.extendable);
  CHECK(g.rank_one_pattern_violation);
}

TEST_CASE("operator sections glue back to their operator") {
  std::mt19937_64 rng(11);
  auto d2 = ContextDiagram::build(2, {{"Az", {kPz}}, {"Ax", {kPx}}, {"Ay", {kPy}}});
  auto d3 = shared_line();
  for (int trial = 0; trial < 20; ++trial) {
    for (const ContextDiagram* d : {&d2, &d3}) {
      CMatrix a = random_hermitian(d->ambient_dim(), rng);
      auto s = section_from_operator(a, *d);
      auto g = glue_section(s, *d);
      CHECK(g.commuting_ok);
      CHECK(g.completely_increasing);
      CHECK(g.extendable);
      CHECK_FALSE(g.rank_one_pattern_violation);
      REQUIRE(g.op);
      auto again = section_from_operator(*g.op, *d);
      for (std::size_t i = 0; i < s.tables.size(); ++i)
        for (std::size_t m = 1; m < s.tables[i].size(); ++m)
          CHECK(again.tables[i][m] == doctest::Approx(s.tables[i][m]).epsilon(1e-9));
    }
  }
}

TEST_CASE("overlap disagreement carries a witness") {
  auto d = shared_line();
  auto s = section_from_operator(CMatrix::diagonal({1, 2, 3}), d);
  // change e1 in R only: D and R now disagree on e1 (and D&R is stale)
  auto r = d.index("R");
  auto m = d.context(r).find(line({1, 0, 0}));
  REQUIRE(m);
  s.tables[r][*m] = -1;
  for (std::uint64_t k = 1; k < s.tables[r].size(); ++k) {
    double mx = -1e300;
    for (std::size_t j = 0; j < 3; ++j)
      if ((k >> j) & 1U) mx = std::max(mx, s.tables[r][std::uint64_t{1} << j]);
    s.tables[r][k] = mx;
  }
  CHECK_FALSE(is_global_section(s, d).holds);
  try {
    glue_section(s, d);
    FAIL("expected CheckFailure");
  } catch (const CheckFailure& e) {
    CHECK(std::string(e.witness()).find("\"overlap\"") != std::string::npos);
  }
}

TEST_CASE("cone restriction equals core restriction on diagonal blocks") {
  // ambient: diagonal 3x3 matrices, projection lattice 2^3 (bit j = e_{j+1})
  auto b3 = corpus::boolean(3);
  auto space = std::make_shared<const StoneSpectrum>(b3);
  std::mt19937_64 rng(5);
  std::vector<std::vector<std::uint64_t>> blocks{{0b011, 0b100}, {0b001, 0b110}, {0b101, 0b010}, {0b111}};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> ev{std::floor(std::uniform_real_distribution<>(-3, 3)(rng)),
                           std::floor(std::uniform_real_distribution<>(-3, 3)(rng)),
                           std::floor(std::uniform_real_distribution<>(-3, 3)(rng))};
    // lattice family: E_l = { e_j | ev_j <= l }
    std::set<double> vs(ev.begin(), ev.end());
    std::vector<Breakpoint> bps;
    for (double v : vs) {
      std::uint64_t mask = 0;
      for (std::size_t j = 0; j < 3; ++j)
        if (ev[j] <= v) mask |= std::uint64_t{1} << j;
      bps.push_back({v, static_cast<ElementId>(mask)});
    }
    auto f = observable_from_spectral(SpectralFamily(b3, bps), space);
    CMatrix a = CMatrix::diagonal(ev);
    for (const auto& blk : blocks) {
      std::vector<CMatrix> gens;
      ElementSet members = ElementSet::from({0, 7});
      for (auto bm : blk) {
        std::vector<double> diag(3);
        for (std::size_t j = 0; j < 3; ++j) diag[j] = (bm >> j) & 1U ? 1.0 : 0.0;
        gens.push_back(CMatrix::diagonal(diag));
        members.insert(bm);
        members.insert(7 & ~bm);
      }
      auto d = ContextDiagram::build(3, {{"D", {CMatrix::diagonal({1, 2, 3})}}, {"B", gens}});
      auto sec = section_from_operator(a, d);
      auto sub = induced_sublattice(b3, members, true);
      auto sub_space = std::make_shared<const StoneSpectrum>(sub.lattice);
      auto fr = restrict_observable(f, sub, sub_space);
      const auto& ctx = d.context(d.index("B"));
      for (ElementId e = 0; e < sub.lattice->size(); ++e) {
        ElementId pm = sub.to_parent(e);
        if (pm == 0) continue;
        std::vector<double> diag(3);
        for (std::size_t j = 0; j < 3; ++j) diag[j] = (pm >> j) & 1U ? 1.0 : 0.0;
        auto mk = ctx.find(CMatrix::diagonal(diag));
        REQUIRE(mk);
        CHECK(fr.at_principal(e) == doctest::Approx(sec.tables[d.index("B")][*mk]));
      }
    }
  }
}

TEST_CASE("gs7 both directions") {
  auto d2 = ContextDiagram::build(2, {{"Az", {kPz}}, {"Ax", {kPx}}, {"Ay", {kPy}}});
  CHECK(converse_scan(d2, {0, 1, 2}) > 0);
  CHECK(converse_scan(shared_line(), {0, 1, 2}) > 0);
  auto d3 = ContextDiagram::build(3, {{"D", {line({1, 0, 0}), line({0, 1, 0})}},
                                      {"R", {line({1, 0, 0}), line({0, 1, 1})}},
                                      {"S", {line({0, 0, 1}), line({1, 1, 0})}}});
  CHECK(d3.contexts().size() <= 8);
  CHECK(converse_scan(d3, {0, 1}) > 0);

  // every global section found by the search glues with (i)
  auto found = search_non_operator_sections(d2, {0, 1, 2});
  CHECK(found.global_sections > 0);
  CHECK(found.non_operator > 0);
  for (const auto& s : found.examples) {
    auto g = glue_section(s, d2);
    CHECK(g.commuting_ok);
    CHECK_FALSE(g.extendable);
  }
}

TEST_CASE("dim-3 search finds sections no operator induces") {
  auto d = shared_line();
  auto found = search_non_operator_sections(d, {0, 1, 2});
  CHECK(found.global_sections > 0);
  CHECK(found.non_operator > 0);
  CHECK(found.non_operator < found.global_sections);
  REQUIRE_FALSE(found.examples.empty());
  for (const auto& s : found.examples) CHECK_FALSE(glue_section(s, d).extendable);
}
