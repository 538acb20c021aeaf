#include <doctest.h>

#include <random>

#include "obsfn/corpus.hpp"
#include "obsfn/error.hpp"
#include "obsfn/sampling.hpp"
#include "obsfn/spectral_family.hpp"

using namespace obsfn;

TEST_CASE("eval follows step semantics") {
  auto mo2 = corpus::mo(2);
  auto a = mo2->id("a");
  SpectralFamily e(mo2, {{1.0, a}, {2.0, mo2->one()}});
  CHECK(e.eval(0.5) == mo2->zero());
  CHECK(e.eval(1.0) == a);
  CHECK(e.eval(1.5) == a);
  CHECK(e.eval(2.0) == mo2->one());
  CHECK(e.eval(100.0) == mo2->one());
  CHECK(e.spectrum() == std::set<double>{1.0, 2.0});
}

TEST_CASE("canonicalization") {
  auto mo2 = corpus::mo(2);
  auto a = mo2->id("a");
  SpectralFamily dup(mo2, {{1.0, a}, {1.5, a}, {2.0, mo2->one()}});
  CHECK(dup.spectrum() == std::set<double>{1.0, 2.0});
  CHECK(dup.breakpoints().size() == 2);
  SpectralFamily lead(mo2, {{-3.0, mo2->zero()}, {1.0, a}, {2.0, mo2->one()}});
  CHECK(lead == dup);
  auto c = SpectralFamily::constant(mo2, 4.0);
  CHECK(c.spectrum() == std::set<double>{4.0});

  CHECK_THROWS_AS(SpectralFamily(mo2, std::vector<Breakpoint>{}), InputError);
  CHECK_THROWS_AS(SpectralFamily(mo2, {{1.0, a}}), InputError);
  CHECK_THROWS_AS(SpectralFamily(mo2, {{2.0, a}, {1.0, mo2->one()}}), InputError);
  CHECK_THROWS_AS(SpectralFamily(mo2, {{1.0, a}, {1.0, mo2->one()}}), InputError);
  CHECK_THROWS_AS(SpectralFamily(mo2, {{1.0, a}, {2.0, mo2->id("b")}, {3.0, mo2->one()}}), InputError);
}

TEST_CASE("restriction") {
  auto b2 = corpus::boolean(2);
  auto p = b2->id("{1}"), pp = b2->id("{2}");
  SpectralFamily e(b2, {{1.0, p}, {2.0, b2->one()}});
  CHECK(e.restrict(b2->one()) == e);
  auto r = e.restrict(pp);
  REQUIRE(r.breakpoints().size() == 1);
  CHECK(r.breakpoints()[0] == Breakpoint{2.0, pp});
  CHECK(r.top() == pp);
  CHECK_THROWS_AS(e.restrict(b2->zero()), PreconditionError);
  CHECK_THROWS_AS(r.restrict(p), PreconditionError);
}

TEST_CASE("canonical form is idempotent and preserves eval") {
  std::mt19937_64 rng(11);
  for (const auto& entry : corpus::standard()) {
    for (int rep = 0; rep < 10; ++rep) {
      auto e = random_family(entry.lattice, rng);
      SpectralFamily again(entry.lattice, e.top(), e.breakpoints());
      CHECK(again == e);
      for (int k = -50; k <= 50; ++k) {
        double lam = k / 4.0;
        CHECK(again.eval(lam) == e.eval(lam));
      }
    }
  }
}

TEST_CASE("spectral presheaf laws and eval commutation") {
  std::mt19937_64 rng(5);
  for (const auto& entry : corpus::standard()) {
    const auto& l = *entry.lattice;
    for (int rep = 0; rep < 4; ++rep) {
      auto e = random_family(entry.lattice, rng);
      for (ElementId c = 0; c < l.size(); ++c) {
        if (c == l.zero()) continue;
        auto ec = e.restrict(c);
        CHECK(ec.restrict(c) == ec);
        for (ElementId b = 0; b < l.size(); ++b) {
          if (b == l.zero() || !l.leq(b, c)) continue;
          auto eb = ec.restrict(b);
          for (ElementId a = 0; a < l.size(); ++a) {
            if (a == l.zero() || !l.leq(a, b)) continue;
            CHECK(eb.restrict(a) == ec.restrict(a));
          }
        }
        for (int k = -24; k <= 24; ++k) {
          double lam = k / 2.0 + 0.25 * (k % 2);
          CHECK(ec.eval(lam) == l.meet(e.eval(lam), c));
        }
      }
    }
  }
}

TEST_CASE("spectrum equals the points of non-constancy") {
  std::mt19937_64 rng(3);
  for (const auto& entry : corpus::standard()) {
    auto e = random_family(entry.lattice, rng);
    // oracle: scan a grid that refines the half-integers
    std::set<double> jumps;
    for (int k = -100; k <= 100; ++k) {
      double lam = k / 8.0;
      if (e.eval(lam) != e.eval(lam - 1.0 / 16.0)) jumps.insert(lam);
    }
    CHECK(jumps == e.spectrum());
  }
}
