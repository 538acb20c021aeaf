#include <doctest.h>

#include <cmath>
#include <functional>

#include "obsfn/error.hpp"
#include "obsfn/observable.hpp"
#include "obsfn/spectral_family.hpp"
#include "obsfn/topology.hpp"

using namespace obsfn;

namespace {

PointSet ps(std::initializer_list<ElementId> ids) { return ElementSet::from(std::vector<ElementId>(ids)); }

FiniteTopSpace chain3() {
  return FiniteTopSpace::from_opens({"1", "2", "3"}, {ps({}), ps({0}), ps({0, 1}), ps({0, 1, 2})});
}

// Oracle: closure as the complement of the union of all opens missing S.
PointSet closure_oracle(const FiniteTopSpace& m, PointSet s) {
  PointSet u;
  for (auto o : m.opens()) {
    if ((o & s).empty()) u |= o;
  }
  return m.all().minus(u);
}

// Oracle: interior as the union of all opens inside S.
PointSet interior_oracle(const FiniteTopSpace& m, PointSet s) {
  PointSet u;
  for (auto o : m.opens())
    if (o.is_subset_of(s)) u |= o;
  return u;
}

// all functions M -> {0..k-1}
void for_each_function(std::size_t n, int k, const std::function<void(const std::vector<double>&)>& fn) {
  std::vector<double> f(n, 0.0);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(k);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = static_cast<double>(c % static_cast<std::size_t>(k));
      c /= static_cast<std::size_t>(k);
    }
    fn(f);
  }
}

// all strictly increasing chains base = U_0 < U_1 < ... < U_k = M of opens
void for_each_chain(const FiniteTopSpace& m, const std::function<void(const TopSpectralFamily&)>& fn) {
  auto us = m.opens();
  std::vector<TopBreakpoint> bps;
  std::function<void(PointSet, PointSet)> rec = [&](PointSet base, PointSet cur) {
    if (cur == m.all()) {
      fn(TopSpectralFamily(m, base, bps));
      return;
    }
    for (auto u : us) {
      if (u != cur && cur.is_subset_of(u)) {
        bps.push_back({static_cast<double>(bps.size()), u});
        rec(base, u);
        bps.pop_back();
      }
    }
  };
  for (auto b : us) rec(b, b);
}

}  // namespace

TEST_CASE("topology validation and enumeration") {
  CHECK_THROWS_AS(FiniteTopSpace::from_opens({"1", "2"}, {ps({}), ps({0}), ps({1})}), InputError);
  CHECK_THROWS_AS(FiniteTopSpace::from_opens({"1", "2", "3"}, {ps({}), ps({0}), ps({1}), ps({0, 1, 2})}),
                  InputError);
  CHECK_THROWS_AS(FiniteTopSpace::from_opens({"1", "1"}, {ps({}), ps({0, 1})}), InputError);
  // number of preorders on n points
  CHECK(FiniteTopSpace::all_topologies(1).size() == 1);
  CHECK(FiniteTopSpace::all_topologies(2).size() == 4);
  CHECK(FiniteTopSpace::all_topologies(3).size() == 29);
  CHECK(FiniteTopSpace::all_topologies(4).size() == 355);
  for (const auto& m : FiniteTopSpace::all_topologies(3)) {
    auto again = FiniteTopSpace::from_opens(m.point_names(), m.opens());
    for (std::size_t x = 0; x < m.size(); ++x)
      CHECK(again.minimal_neighbourhood(x) == m.minimal_neighbourhood(x));
  }
}

TEST_CASE("interior and closure") {
  auto m = chain3();
  CHECK(m.closure(ps({0})) == ps({0, 1, 2}));
  CHECK(m.closure(ps({})) == ps({}));
  CHECK(m.interior(ps({0, 1})) == ps({0, 1}));
  CHECK(m.interior(ps({1, 2})) == ps({}));
  for (const auto& t : FiniteTopSpace::all_topologies(4)) {
    for (std::uint64_t b = 0; b < 16; ++b) {
      PointSet s(b);
      CHECK(t.closure(s) == closure_oracle(t, s));
      CHECK(t.interior(s) == interior_oracle(t, s));
      if (t.is_open(s)) CHECK(t.interior(s) == s);
    }
  }
}

TEST_CASE("sigma_from_function on the three point chain") {
  auto m = chain3();
  auto s = sigma_from_function(m, {1, 2, 3});
  CHECK(s.eval(1) == ps({0}));
  CHECK(s.eval(2) == ps({0, 1}));
  CHECK(s.eval(3) == m.all());
  CHECK(s.eval(0.5) == ps({}));
  CHECK(s.admissible_domain() == m.all());

  auto c = sigma_from_function(m, {4, 4, 4});
  REQUIRE(c.breakpoints().size() == 1);
  CHECK(c.breakpoints()[0] == TopBreakpoint{4, m.all()});
  CHECK(spectrum_and_resolvent(c).spectrum == std::set<double>{4});

  // id is not continuous here: closure({1}) = M escapes sigma(mu) for 1 < mu < 2
  CHECK_FALSE(is_continuous_function(m, {1, 2, 3}));
  auto rep = is_continuous_family(s);
  CHECK_FALSE(rep.continuous);
  REQUIRE(rep.witness);
  CHECK(rep.witness->first == 1.0);
  CHECK(rep.witness->second > 1.0);
  CHECK(rep.witness->second < 2.0);

  // discontinuous f: f(2) = 0 is lost in the interior
  auto d = sigma_from_function(m, {1, 0, 3});
  CHECK(d.induced_function(1) == 1.0);
  CHECK(d.eval(0) == ps({}));
}

TEST_CASE("continuity on a disconnected space") {
  // {1} and {2,3} clopen, 2 specializes to 3
  auto m = FiniteTopSpace::from_opens({"1", "2", "3"}, {ps({}), ps({0}), ps({1}), ps({0, 1}), ps({1, 2}),
                                                         ps({0, 1, 2})});
  CHECK(is_continuous_function(m, {5, 7, 7}));
  auto s = sigma_from_function(m, {5, 7, 7});
  auto rep = is_continuous_family(s);
  CHECK(rep.continuous);
  CHECK(rep.values_regular_open);
  CHECK(rep.domain_open);
  CHECK(rep.domain_dense);
}

TEST_CASE("round trip f -> sigma_f -> f on all continuous functions, up to 4 points") {
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& m : FiniteTopSpace::all_topologies(n)) {
      for_each_function(n, static_cast<int>(n), [&](const std::vector<double>& f) {
        auto s = sigma_from_function(m, f);
        // identity of the right limit at the breakpoints
        for (const auto& b : s.breakpoints()) {
          PointSet below, strict;
          for (std::size_t x = 0; x < n; ++x) {
            if (f[x] <= b.lambda) below.insert(x);
            if (f[x] < b.lambda + 0.5) strict.insert(x);
          }
          CHECK(m.interior(strict) == m.interior(below));
        }
        auto sp = spectrum_and_resolvent(s);
        CHECK(sp.equal);
        if (!is_continuous_function(m, f)) return;
        ++checked;
        CHECK(s.admissible_domain() == m.all());
        auto rep = is_continuous_family(s);
        CHECK(rep.continuous);
        CHECK(rep.values_regular_open);
        for (std::size_t x = 0; x < n; ++x) CHECK(s.induced_function(x) == f[x]);
      });
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("sigma_{f_sigma} = sigma cap D for every continuous step family, up to 4 points") {
  std::size_t continuous = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& m : FiniteTopSpace::all_topologies(n)) {
      for_each_chain(m, [&](const TopSpectralFamily& s) {
        auto rep = is_continuous_family(s);
        // oracle: continuity on a finite space means every value is closed
        bool closed = m.is_closed(s.base());
        for (const auto& b : s.breakpoints()) closed = closed && m.is_closed(b.value);
        CHECK(rep.continuous == closed);
        if (!rep.continuous) return;
        ++continuous;
        CHECK(rep.domain_open);
        CHECK(rep.values_regular_open);
        PointSet d = s.admissible_domain();
        std::vector<double> f(n, 0.0);
        d.for_each([&](ElementId x) { f[x] = s.induced_function(x); });
        // f_sigma is continuous on D
        d.for_each([&](ElementId x) {
          (m.minimal_neighbourhood(x) & d).for_each([&](ElementId y) { CHECK(f[y] == f[x]); });
        });
        for (const auto& b : s.breakpoints()) {
          PointSet pre;
          d.for_each([&](ElementId x) {
            if (f[x] <= b.lambda) pre.insert(x);
          });
          CHECK(m.interior_in(d, pre) == (b.value & d));
        }
      });
    }
  }
  CHECK(continuous > 0);
}

TEST_CASE("quasipoints of T(M) over a point see the induced value") {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const auto& m : FiniteTopSpace::all_topologies(n)) {
      auto lat = m.open_set_lattice();
      auto space = std::make_shared<const StoneSpectrum>(lat);
      auto us = m.opens();
      auto id_of = [&](PointSet u) {
        for (std::size_t i = 0; i < us.size(); ++i)
          if (us[i] == u) return static_cast<ElementId>(i);
        FAIL("not open");
        return ElementId{0};
      };
      for_each_chain(m, [&](const TopSpectralFamily& s) {
        if (!s.base().empty() || !is_continuous_family(s).continuous) return;
        std::vector<Breakpoint> bps;
        for (const auto& b : s.breakpoints()) bps.push_back({b.lambda, id_of(b.value)});
        SpectralFamily e(lat, bps);
        auto f = observable_from_spectral(e, space);
        for (auto q : space->quasipoints()) {
          PointSet atom = us[lat->meet(space->ideal(q).members)];
          m.closure(atom).for_each([&](ElementId x) { CHECK(f.at(q) == s.induced_function(x)); });
        }
      });
    }
  }
}

TEST_CASE("grid families reproduce their target functions") {
  auto g = CellGrid::parse("-2:2:0.25");
  CHECK(g.intervals == 16);
  CHECK(g.space.size() == 33);
  for (std::string name : {"id", "abs", "ln", "step"}) {
    auto s = grid_family(g, name);
    auto sample = sample_induced(g, s);
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
      double x = sample.points[i];
      double want = name == "id" ? x : name == "abs" ? std::abs(x) : name == "ln" ? std::log(std::abs(x))
                                                                                     : std::floor(x);
      CHECK(sample.values[i] == want);
    }
    CHECK(sample.points.size() == (name == "ln" ? 16U : 17U));
    CHECK(spectrum_and_resolvent(s).equal);
  }
  std::size_t half = 10;  // grid point 0.5
  CHECK(grid_family(g, "abs").induced_function(g.vertex(half)) == 0.5);
  CHECK(grid_family(g, "step").induced_function(g.vertex(14)) == 1.0);  // 1.5
  CHECK(grid_family(g, "step").spectrum() == std::set<double>{-2, -1, 0, 1, 2});
  CHECK_THROWS_AS(grid_family(g, "sin"), InputError);
  CHECK_THROWS_AS(CellGrid::parse("0:1:0.3"), InputError);
  CHECK_THROWS_AS(CellGrid::parse("0:64:1"), ResourceError);
}

TEST_CASE("ln grid family excludes 0 from its domain") {
  auto g = CellGrid::parse("-2:2:0.25");
  auto s = grid_family(g, "ln");
  PointSet d = s.admissible_domain();
  CHECK_FALSE(d.contains(g.vertex(8)));
  CHECK_THROWS_AS(s.induced_function(g.vertex(8)), DomainError);
  for (std::size_t j = 0; j < g.vertices(); ++j) CHECK(d.contains(g.vertex(j)) == (j != 8));
  // the open base contains the two cells next to 0, so D is closed and not dense
  auto rep = is_continuous_family(s);
  CHECK_FALSE(rep.domain_dense);
  CHECK_FALSE(rep.domain_open);
}

TEST_CASE("id grid on {-1, 0, 1}") {
  auto g = CellGrid::parse("-1:1:1");
  auto s = grid_family(g, "id");
  CHECK(s.spectrum() == std::set<double>{-1, 0, 1});
}

TEST_CASE("continuity at grid resolution") {
  auto g = CellGrid::parse("-2:2:0.25");
  CHECK(is_continuous_family(grid_family(g, "id"), g.step).continuous);
  CHECK(is_continuous_family(grid_family(g, "abs"), g.step).continuous);
  CHECK_FALSE(is_continuous_family(grid_family(g, "ln"), g.step).continuous);
  auto rep = is_continuous_family(grid_family(g, "step"), g.step);
  CHECK_FALSE(rep.continuous);
  REQUIRE(rep.witness);
  double n = rep.witness->first;
  CHECK(n == std::floor(n));
  CHECK(rep.witness->second - n < 1.0);
  // exact mode sees the discretization steps
  CHECK_FALSE(is_continuous_family(grid_family(g, "id")).continuous);
}

TEST_CASE("literal step family induces floor + 1") {
  auto g = CellGrid::parse("-2:2:0.25");
  auto s = grid_step_literal(g);
  auto sample = sample_induced(g, s);
  for (std::size_t i = 0; i < sample.points.size(); ++i)
    CHECK(sample.values[i] == std::floor(sample.points[i]) + 1);
}

TEST_CASE("family validation") {
  auto m = chain3();
  CHECK_THROWS_AS(TopSpectralFamily(m, ps({}), {{1, ps({1})}, {2, m.all()}}), InputError);
  CHECK_THROWS_AS(TopSpectralFamily(m, ps({}), {{1, ps({0})}}), InputError);
  TopSpectralFamily u(m, ps({}), {{1, ps({0})}}, true);
  CHECK(u.unbounded_above());
  CHECK_THROWS_AS(u.induced_function(2), DomainError);
  CHECK_THROWS_AS(TopSpectralFamily(m, ps({}), {{2, ps({0})}, {1, m.all()}}), InputError);
}

TEST_CASE("specialization DOT") {
  auto dot = chain3().to_dot();
  CHECK(dot.find("\"2\" -> \"1\"") != std::string::npos);
  CHECK(dot.find("\"3\" -> \"2\"") != std::string::npos);
  CHECK(dot.find("\"3\" -> \"1\"") == std::string::npos);
}
