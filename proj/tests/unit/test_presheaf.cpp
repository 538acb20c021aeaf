#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "obsfn/corpus.hpp"
#include "obsfn/error.hpp"
#include "obsfn/presheaf.hpp"

using namespace obsfn;

namespace {

// Oracle: number of classes of the disjoint union of S(b), b >= atom, under
// s ~ restriction of s (union-find).
std::size_t colimit_size(const FinitePresheaf& s, ElementId atom) {
  const auto& l = s.lattice();
  std::vector<std::pair<ElementId, std::size_t>> nodes;
  std::map<std::pair<ElementId, std::size_t>, std::size_t> id;
  l.up(atom).for_each([&](ElementId b) {
    for (std::size_t i = 0; i < s.size(b); ++i) {
      id[{b, i}] = nodes.size();
      nodes.emplace_back(b, i);
    }
  });
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto& [b, i] : nodes) {
    l.up(atom).for_each([&](ElementId c) {
      if (l.leq(c, b)) parent[find(id[{b, i}])] = find(id[{c, s.restrict(c, b, i)}]);
    });
  }
  std::set<std::size_t> roots;
  for (std::size_t x = 0; x < nodes.size(); ++x) roots.insert(find(x));
  return roots.size();
}

// Oracle: gluings of a family over a cover by scanning S(a).
std::size_t gluings(const FinitePresheaf& s, ElementId a, const std::vector<ElementId>& cover,
                    const std::vector<std::size_t>& fam) {
  std::size_t n = 0;
  for (std::size_t x = 0; x < s.size(a); ++x) {
    bool ok = true;
    for (std::size_t j = 0; j < cover.size(); ++j) ok = ok && s.restrict(cover[j], a, x) == fam[j];
    if (ok) ++n;
  }
  return n;
}

bool compatible(const FinitePresheaf& s, const std::vector<ElementId>& cover, const std::vector<std::size_t>& fam) {
  const auto& l = s.lattice();
  for (std::size_t i = 0; i < cover.size(); ++i)
    for (std::size_t j = 0; j < cover.size(); ++j) {
      ElementId m = l.meet(cover[i], cover[j]);
      if (m != l.zero() && s.restrict(m, cover[i], fam[i]) != s.restrict(m, cover[j], fam[j])) return false;
    }
  return true;
}

std::size_t label_index(const FinitePresheaf& s, ElementId a, const std::string& label) {
  const auto& ls = s.labels(a);
  auto it = std::find(ls.begin(), ls.end(), label);
  REQUIRE(it != ls.end());
  return static_cast<std::size_t>(it - ls.begin());
}

// Same presheaf with every S(a) listed in a shuffled order.
FinitePresheaf permuted(const FinitePresheaf& s, std::mt19937_64& rng) {
  const auto& l = s.lattice();
  std::vector<std::vector<std::size_t>> perm(l.size());  // new index of old i
  FinitePresheaf out(s.lattice_ptr());
  for (ElementId a = 0; a < l.size(); ++a) {
    perm[a].resize(s.size(a));
    std::iota(perm[a].begin(), perm[a].end(), 0);
    std::shuffle(perm[a].begin(), perm[a].end(), rng);
    std::vector<std::string> labels(s.size(a));
    for (std::size_t i = 0; i < s.size(a); ++i) labels[perm[a][i]] = s.labels(a)[i];
    out.set_values(a, labels);
  }
  for (ElementId b = 0; b < l.size(); ++b) {
    l.down(b).for_each([&](ElementId a) {
      std::vector<std::size_t> map(s.size(b));
      for (std::size_t i = 0; i < s.size(b); ++i) map[perm[b][i]] = perm[a][s.restrict(a, b, i)];
      out.set_restriction(a, b, map);
    });
  }
  return out;
}

}  // namespace

TEST_CASE("spectral presheaf of MO2") {
  auto mo2 = corpus::mo(2);
  auto s = spectral_presheaf(mo2, {1, 2});
  CHECK(s.size(mo2->zero()) == 1);
  CHECK(s.size(mo2->id("a")) == 2);
  CHECK(s.size(mo2->one()) == 6);
  CHECK(check_presheaf(s).holds);

  // E = [(1,a),(2,1)] restricts to [(1,a)] on a and [(2,b)] on b
  ElementId a = mo2->id("a"), b = mo2->id("b");
  auto e = label_index(s, mo2->one(), "[(1,a),(2,1)]");
  CHECK(s.labels(a)[s.restrict(a, mo2->one(), e)] == "[(1,a)]");
  CHECK(s.labels(b)[s.restrict(b, mo2->one(), e)] == "[(2,b)]");
}

TEST_CASE("a corrupted restriction is caught on a chain") {
  auto c4 = corpus::chain(4);
  auto s = spectral_presheaf(c4, {1, 2});
  CHECK(check_presheaf(s).holds);
  ElementId m1 = c4->id("m1");
  std::vector<std::size_t> bad(s.size(c4->one()), 0);
  s.set_restriction(m1, c4->one(), bad);
  auto rep = check_presheaf(s);
  CHECK_FALSE(rep.holds);
  REQUIRE(rep.chain.size() == 3);
  CHECK(rep.chain[0] == m1);
  CHECK(rep.chain[1] == c4->id("m2"));
  CHECK(rep.chain[2] == c4->one());
  CHECK(s.restrict(rep.chain[0], rep.chain[1], s.restrict(rep.chain[1], rep.chain[2], rep.value)) !=
        s.restrict(rep.chain[0], rep.chain[2], rep.value));

  auto mo2 = corpus::mo(2);
  ElementId a = mo2->id("a");
  auto t = spectral_presheaf(mo2, {1, 2});
  std::vector<std::size_t> swap(t.size(a));
  swap[0] = 1;
  swap[1] = 0;
  t.set_restriction(a, a, swap);
  auto r2 = check_presheaf(t);
  CHECK_FALSE(r2.holds);
  CHECK(r2.chain == std::vector<ElementId>{a, a, a});
}

TEST_CASE("missing restriction maps are input errors") {
  auto b2 = corpus::boolean(2);
  FinitePresheaf s(b2);
  for (ElementId x = 0; x < 4; ++x) s.set_values(x, {"*"});
  CHECK_THROWS_AS(check_presheaf(s), InputError);
  CHECK_THROWS_AS(s.set_restriction(1, 2, {0}), InputError);
}

TEST_CASE("one-element lattice") {
  auto one = Lattice::from_order({"0"}, {});
  auto s = constant_presheaf(one, {"x"});
  CHECK(check_presheaf(s).holds);
  CHECK(check_sheaf_condition(s).holds);
}

TEST_CASE("MO2 spectral presheaf is not a sheaf") {
  auto mo2 = corpus::mo(2);
  auto s = spectral_presheaf(mo2, {1, 2});
  auto rep = check_sheaf_condition(s);
  CHECK_FALSE(rep.holds);
  CHECK_FALSE(rep.existence);
  CHECK_FALSE(rep.uniqueness);
  REQUIRE(rep.existence_witness);
  const auto& w = *rep.existence_witness;
  CHECK(mo2->join(std::span<const ElementId>(w.cover)) == w.element);
  CHECK(compatible(s, w.cover, w.family));
  CHECK(gluings(s, w.element, w.cover, w.family) == 0);
  REQUIRE(rep.uniqueness_witness);
  const auto& u = *rep.uniqueness_witness;
  CHECK(compatible(s, u.cover, u.family));
  CHECK(gluings(s, u.element, u.cover, u.family) > 1);

  // the cover {a, b, a'} with families [(1,a)], [(1,b)], [(2,a')]
  ElementId a = mo2->id("a"), b = mo2->id("b"), ap = mo2->id("a'");
  std::vector<ElementId> cover{a, b, ap};
  std::vector<std::size_t> fam{label_index(s, a, "[(1,a)]"), label_index(s, b, "[(1,b)]"),
                               label_index(s, ap, "[(2,a')]")};
  CHECK(compatible(s, cover, fam));
  CHECK(gluings(s, mo2->one(), cover, fam) == 0);
}

TEST_CASE("sheaves that pass") {
  auto mo2 = corpus::mo(2);
  CHECK(check_sheaf_condition(constant_presheaf(mo2, {"*"})).holds);
  CHECK(check_sheaf_condition(constant_presheaf(corpus::boolean(3), {"*"})).holds);
  // distributive lattices: E = (E meet a) join (E meet b)
  for (std::size_t n = 1; n <= 3; ++n) {
    auto s = spectral_presheaf(corpus::boolean(n), {1, 2});
    CHECK(check_presheaf(s).holds);
    CHECK(check_sheaf_condition(s).holds);
  }
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const auto& m : FiniteTopSpace::all_topologies(n)) {
      auto s = function_presheaf(m, {"0", "1"});
      CHECK(check_presheaf(s).holds);
      CHECK(check_sheaf_condition(s).holds);
    }
  }
  // a two-point constant presheaf cannot glue across disjoint covers
  auto two = check_sheaf_condition(constant_presheaf(corpus::boolean(2), {"x", "y"}));
  CHECK_FALSE(two.existence);
}

TEST_CASE("stalks") {
  auto b2 = corpus::boolean(2);
  auto s = spectral_presheaf(b2, {1, 2});
  StoneSpectrum space(b2);
  for (auto q : space.quasipoints()) {
    auto st = stalk(s, space, q);
    CHECK(st.germs.size() == colimit_size(s, st.atom));
    CHECK(b2->down(st.atom).size() == 2);
  }
  auto qa = space.principal_index(b2->id("{1}"));
  auto st = stalk(s, space, qa);
  CHECK(std::set<std::string>(st.germs.begin(), st.germs.end()) ==
        std::set<std::string>{"[(1,{1})]", "[(2,{1})]"});
  CHECK_THROWS_AS(stalk(s, space, space.top_index()), PreconditionError);

  auto c = constant_presheaf(b2, {"u", "v", "w"});
  for (auto q : space.quasipoints()) CHECK(stalk(c, space, q).germs == std::vector<std::string>{"u", "v", "w"});

  auto mo2 = corpus::mo(2);
  auto sm = spectral_presheaf(mo2, {1, 2, 3});
  StoneSpectrum sp2(mo2);
  for (auto q : sp2.quasipoints()) {
    auto g = stalk(sm, sp2, q);
    CHECK(g.germs.size() == colimit_size(sm, g.atom));
  }
}

TEST_CASE("sheafification") {
  std::mt19937_64 rng(7);
  for (auto l : {corpus::mo(2), corpus::boolean(2), corpus::chain(3)}) {
    auto s = spectral_presheaf(l, {1, 2});
    auto sh = sheafify(s);
    CHECK(check_presheaf(sh.sheaf).holds);
    CHECK(check_sheaf_condition(sh.sheaf).holds);
    const auto& bl = sh.sheaf.lattice();
    for (ElementId u = 0; u < bl.size(); ++u) {
      std::size_t prod = 1;
      for (std::size_t q = 0; q < sh.stalks.size(); ++q)
        if ((u >> q) & 1U) prod *= sh.stalks[q].germs.size();
      CHECK(sh.sheaf.size(u) == prod);
    }
    // canonical map commutes with restriction
    const auto& lat = s.lattice();
    for (ElementId b = 0; b < lat.size(); ++b) {
      lat.down(b).for_each([&](ElementId a) {
        for (std::size_t i = 0; i < s.size(b); ++i) {
          auto lhs = sh.sheaf.restrict(sh.basis[a], sh.basis[b], sh.canonical[b][i]);
          auto rhs = sh.canonical[a][s.restrict(a, b, i)];
          CHECK(lhs == rhs);
        }
      });
    }
    // another listing of the same presheaf gives the same cardinalities and a
    // label-preserving isomorphism
    auto p = permuted(s, rng);
    CHECK(check_presheaf(p).holds);
    auto sp = sheafify(p);
    for (ElementId u = 0; u < bl.size(); ++u) {
      CHECK(sp.sheaf.size(u) == sh.sheaf.size(u));
      std::set<std::string> x(sh.sheaf.labels(u).begin(), sh.sheaf.labels(u).end());
      std::set<std::string> y(sp.sheaf.labels(u).begin(), sp.sheaf.labels(u).end());
      CHECK(x == y);
    }
    for (ElementId b = 0; b < lat.size(); ++b)
      for (std::size_t i = 0; i < s.size(b); ++i) {
        const auto& lab = s.labels(b)[i];
        auto j = label_index(p, b, lab);
        CHECK(sh.sheaf.labels(sh.basis[b])[sh.canonical[b][i]] ==
              sp.sheaf.labels(sp.basis[b])[sp.canonical[b][j]]);
      }
  }
}

TEST_CASE("sheafification of MO2 forgets the non-gluable data") {
  auto mo2 = corpus::mo(2);
  auto s = spectral_presheaf(mo2, {1, 2});
  auto sh = sheafify(s);
  CHECK(sh.stalks.size() == 4);
  CHECK(sh.sheaf.size(sh.basis[mo2->one()]) == 16);
  // 6 families on 1 map injectively into 16 sections
  std::set<std::size_t> img(sh.canonical[mo2->one()].begin(), sh.canonical[mo2->one()].end());
  CHECK(img.size() == 6);
}
