#include <doctest.h>

#include <algorithm>
#include <set>

#include "obsfn/corpus.hpp"
#include "obsfn/error.hpp"
#include "obsfn/stone.hpp"

using namespace obsfn;

namespace {

// Oracle: dual ideals by checking the three axioms element-wise on all subsets.
std::vector<ElementSet> brute_dual_ideals(const Lattice& l) {
  std::vector<ElementSet> out;
  const std::size_t n = l.size();
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    ElementSet s(m);
    if (s.contains(l.zero())) continue;
    bool ok = true;
    for (ElementId a = 0; a < n && ok; ++a) {
      if (!s.contains(a)) continue;
      for (ElementId b = 0; b < n && ok; ++b) {
        if (l.leq(a, b) && !s.contains(b)) ok = false;
        if (s.contains(b) && !s.contains(l.meet(a, b))) ok = false;
      }
    }
    if (ok) out.push_back(s);
  }
  return out;
}

std::optional<ElementSet> brute_smallest_containing(const Lattice& l, ElementSet f) {
  std::optional<ElementSet> best;
  for (auto s : brute_dual_ideals(l)) {
    if (!f.is_subset_of(s)) continue;
    if (!best || s.is_subset_of(*best)) best = s;
  }
  return best;
}

ElementSet named(const Lattice& l, std::initializer_list<const char*> names) {
  ElementSet s;
  for (auto n : names) s.insert(l.id(n));
  return s;
}

std::set<std::uint64_t> as_set(const std::vector<std::size_t>& idx, const StoneSpectrum& sp) {
  std::set<std::uint64_t> out;
  for (auto i : idx) out.insert(sp.ideal(i).members.bits());
  return out;
}

}  // namespace

TEST_CASE("filter bases") {
  auto mo2 = corpus::mo(2);
  CHECK(is_filter_base(*mo2, named(*mo2, {"1"})));
  CHECK_FALSE(is_filter_base(*mo2, named(*mo2, {"a", "a'"})));
  CHECK_FALSE(is_filter_base(*mo2, ElementSet{}));
  CHECK_FALSE(is_filter_base(*mo2, named(*mo2, {"0", "1"})));
  auto c5 = corpus::chain(5);
  CHECK(is_filter_base(*c5, c5->all().minus(ElementSet::singleton(c5->zero()))));
}

TEST_CASE("cone") {
  auto b3 = corpus::boolean(3);
  const auto& l = *b3;
  CHECK(cone(l, named(l, {"1"})).members == named(l, {"1"}));
  auto a = l.id("{1}");
  CHECK(cone(l, ElementSet::singleton(a)) == principal(l, a));
  // {{1,2},{2,3}} has its only common lower bound {2} outside the set
  auto f = named(l, {"{1,2}", "{2,3}"});
  CHECK_FALSE(is_filter_base(l, f));
  CHECK_THROWS_AS(cone(l, f), PreconditionError);
  auto gen = generated_dual_ideal(l, f);
  REQUIRE(gen);
  CHECK(gen->members == brute_smallest_containing(l, f).value());
  CHECK(gen->members == l.up(l.id("{2}")));
  CHECK_FALSE(generated_dual_ideal(l, named(l, {"{1}", "{2}"})).has_value());
}

TEST_CASE("cone agrees with the brute-force smallest dual ideal on filter bases") {
  for (const auto& e : corpus::standard()) {
    const auto& l = *e.lattice;
    if (l.size() > 12) continue;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << l.size()); ++m) {
      ElementSet f(m);
      if (!is_filter_base(l, f)) continue;
      CHECK(cone(l, f).members == brute_smallest_containing(l, f).value());
    }
  }
}

TEST_CASE("dual-ideal enumeration") {
  auto c3 = corpus::chain(3);
  auto d = enumerate_dual_ideals(*c3);
  REQUIRE(d.size() == 2);
  CHECK(d[0].members == named(*c3, {"1"}));
  CHECK(d[1].members == named(*c3, {"m", "1"}));

  auto b2 = corpus::boolean(2);
  auto d2 = enumerate_dual_ideals(*b2);
  REQUIRE(d2.size() == 3);
  CHECK(d2[0].members == named(*b2, {"1"}));
  CHECK(d2[1].members == named(*b2, {"{1}", "1"}));
  CHECK(d2[2].members == named(*b2, {"{2}", "1"}));

  CHECK(enumerate_dual_ideals(*corpus::mo(2)).size() == 5);

  for (const auto& e : corpus::standard()) {
    const auto& l = *e.lattice;
    auto got = enumerate_dual_ideals(l);
    auto oracle = brute_dual_ideals(l);
    CHECK(got.size() == oracle.size());
    for (auto s : oracle) {
      CHECK(std::find(got.begin(), got.end(), DualIdeal{s}) != got.end());
    }
    for (std::size_t i = 1; i < got.size(); ++i) CHECK(canonical_less(got[i - 1].members, got[i].members));
    // generation path gives the same list as the subset scan
    CHECK(enumerate_dual_ideals(l, 64, 0) == got);
  }
  CHECK_THROWS_AS(enumerate_dual_ideals(*corpus::boolean(4), 8), ResourceError);
}

TEST_CASE("quasipoints") {
  CHECK(enumerate_quasipoints(*corpus::boolean(3)).size() == 3);
  CHECK(enumerate_quasipoints(*corpus::mo(2)).size() == 4);
  auto c3 = corpus::chain(3);
  auto q = enumerate_quasipoints(*c3);
  REQUIRE(q.size() == 1);
  CHECK(q[0] == principal(*c3, c3->id("m")));
  for (const auto& e : corpus::standard()) {
    const auto& l = *e.lattice;
    auto qs = enumerate_quasipoints(l);
    ElementSet at = atoms(l);
    CHECK(qs.size() == at.size());
    std::set<std::uint64_t> from_atoms;
    at.for_each([&](ElementId a) { from_atoms.insert(l.up(a).bits()); });
    for (const auto& x : qs) {
      CHECK((x.members & at).size() == 1);
      CHECK(from_atoms.count(x.members.bits()) == 1);
    }
  }
}

TEST_CASE("basis sets") {
  auto mo2 = corpus::mo(2);
  StoneSpectrum sp(mo2);
  CHECK(sp.quasipoints_containing(mo2->one()) == sp.quasipoints());
  CHECK(sp.quasipoints_containing(mo2->zero()).empty());
  auto qa = sp.quasipoints_containing(mo2->id("a"));
  REQUIRE(qa.size() == 1);
  CHECK(sp.ideal(qa[0]) == principal(*mo2, mo2->id("a")));
}

TEST_CASE("basis-set algebra on every corpus lattice") {
  for (const auto& e : corpus::standard()) {
    const auto& l = *e.lattice;
    StoneSpectrum sp(e.lattice);
    CHECK(sp.ideals_containing(l.zero()).empty());
    for (ElementId a = 0; a < l.size(); ++a) {
      for (ElementId b = 0; b < l.size(); ++b) {
        auto da = as_set(sp.ideals_containing(a), sp);
        auto db = as_set(sp.ideals_containing(b), sp);
        auto dmeet = as_set(sp.ideals_containing(l.meet(a, b)), sp);
        auto djoin = as_set(sp.ideals_containing(l.join(a, b)), sp);
        std::set<std::uint64_t> inter, uni;
        std::set_intersection(da.begin(), da.end(), db.begin(), db.end(), std::inserter(inter, inter.end()));
        std::set_union(da.begin(), da.end(), db.begin(), db.end(), std::inserter(uni, uni.end()));
        CHECK(dmeet == inter);
        CHECK(std::includes(djoin.begin(), djoin.end(), uni.begin(), uni.end()));
        if (l.leq(a, b)) CHECK(std::includes(db.begin(), db.end(), da.begin(), da.end()));
        auto qa = as_set(sp.quasipoints_containing(a), sp);
        auto qb = as_set(sp.quasipoints_containing(b), sp);
        auto qm = as_set(sp.quasipoints_containing(l.meet(a, b)), sp);
        std::set<std::uint64_t> qi;
        std::set_intersection(qa.begin(), qa.end(), qb.begin(), qb.end(), std::inserter(qi, qi.end()));
        CHECK(qm == qi);
      }
      // every nonempty D_a contains a quasipoint
      if (a != l.zero()) CHECK_FALSE(sp.quasipoints_containing(a).empty());
    }
    // cones are idempotent on dual ideals
    for (const auto& j : sp.dual_ideals()) CHECK(cone(l, j.members) == j);
  }
}

TEST_CASE("principal ideal as intersection of quasipoints") {
  auto check = [](const Lattice& l, bool expect_all) {
    auto qs = enumerate_quasipoints(l);
    bool all = true;
    for (ElementId p = 0; p < l.size(); ++p) {
      if (p == l.zero()) continue;
      ElementSet inter = l.all();
      for (const auto& q : qs) {
        if (q.contains(p)) inter &= q.members;
      }
      all = all && inter == l.up(p);
    }
    CHECK(all == expect_all);
  };
  for (const auto& e : corpus::standard()) {
    if (is_atomistic(*e.lattice)) check(*e.lattice, true);
  }
  check(*corpus::chain(3), false);
  check(*corpus::chain(6), false);
  check(*corpus::o6(), false);
}

TEST_CASE("quasipoints restrict to quasipoints of the center") {
  for (const auto& e : corpus::ortholattices()) {
    if (!is_orthomodular(*e.lattice).orthomodular) continue;
    auto sub = induced_sublattice(e.lattice, center(*e.lattice), true);
    auto center_qs = enumerate_quasipoints(*sub.lattice);
    std::set<std::uint64_t> targets;
    for (const auto& q : center_qs) {
      ElementSet in_parent;
      q.members.for_each([&](ElementId x) { in_parent.insert(sub.to_parent(x)); });
      targets.insert(in_parent.bits());
    }
    std::set<std::uint64_t> hit;
    for (const auto& q : enumerate_quasipoints(*e.lattice)) {
      auto image = q.members & sub.members_in_parent();
      CHECK(targets.count(image.bits()) == 1);
      hit.insert(image.bits());
    }
    CHECK(hit == targets);  // surjective
  }
}

TEST_CASE("ideal keys") {
  auto mo2 = corpus::mo(2);
  auto j = principal(*mo2, mo2->id("a"));
  CHECK(ideal_key(*mo2, j) == "a,1");
  CHECK(parse_ideal(*mo2, "1, a") == j);
  CHECK_THROWS_AS(parse_ideal(*mo2, "a,b,1"), InputError);
  StoneSpectrum sp(mo2);
  CHECK(sp.to_dot().find("digraph") != std::string::npos);
}
