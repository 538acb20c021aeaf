#include <doctest.h>

#include <cmath>
#include <random>

#include "obsfn/error.hpp"
#include "obsfn/sampling.hpp"
#include "obsfn/vn.hpp"

using namespace obsfn;

namespace {

double max_offdiag_orthonormality(const CMatrix& v) {
  auto g = v.adjoint() * v;
  return distance(g, CMatrix::identity(v.rows()));
}

CMatrix diag(std::vector<double> d) { return CMatrix::diagonal(d); }

// diagonal units e_ii for the given index block
CMatrix block_projection(std::size_t n, std::vector<std::size_t> idx) {
  CMatrix p(n, n);
  for (auto i : idx) p(i, i) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("eigen_hermitian small cases") {
  auto e = eigen_hermitian(diag({1, 2}));
  CHECK(e.values == std::vector<double>{1, 2});
  CHECK(distance(e.vectors * e.vectors.adjoint(), CMatrix::identity(2)) < 1e-12);

  CMatrix x(2, 2);
  x(0, 1) = 1;
  x(1, 0) = 1;
  auto ex = eigen_hermitian(x);
  CHECK(ex.values[0] == doctest::Approx(-1).epsilon(1e-14));
  CHECK(ex.values[1] == doctest::Approx(1).epsilon(1e-14));

  // closed form for 2x2 with complex off-diagonal
  CMatrix h(2, 2);
  h(0, 0) = 0.3;
  h(1, 1) = -1.2;
  h(0, 1) = cplx(0.4, -0.7);
  h(1, 0) = std::conj(h(0, 1));
  const double mean = (0.3 - 1.2) / 2, rad = std::sqrt(0.75 * 0.75 + std::norm(h(0, 1)));
  auto eh = eigen_hermitian(h);
  CHECK(std::abs(eh.values[0] - (mean - rad)) < 1e-13);
  CHECK(std::abs(eh.values[1] - (mean + rad)) < 1e-13);

  CMatrix bad(2, 2);
  bad(0, 1) = 1;
  CHECK_THROWS_AS(eigen_hermitian(bad), InputError);
}

TEST_CASE("eigen_hermitian on random matrices") {
  std::mt19937_64 rng(1);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      auto a = random_hermitian(n, rng);
      auto e = eigen_hermitian(a);
      CMatrix rec(n, n);
      for (std::size_t k = 0; k < n; ++k) rec += CMatrix::outer(e.vectors.col(k)) * cplx(e.values[k]);
      CHECK(distance(rec, a) < 1e-9);
      CHECK(max_offdiag_orthonormality(e.vectors) < 1e-10);
      CHECK(std::is_sorted(e.values.begin(), e.values.end()));
      // invariants: trace and Frobenius norm
      double s = 0, s2 = 0;
      for (double v : e.values) { s += v; s2 += v * v; }
      CHECK(std::abs(s - a.trace().real()) < 1e-10);
      CHECK(std::abs(s2 - a.frobenius() * a.frobenius()) < 1e-9);
    }
  }
}

TEST_CASE("spectral families of operators") {
  auto e = spectral_family_of(diag({1, 1, 2}));
  REQUIRE(e.lambdas.size() == 2);
  CHECK(e.lambdas[0] == doctest::Approx(1));
  CHECK(projection_rank(e.projections[0]) == 2);
  CHECK(projection_rank(e.projections[1]) == 3);

  std::mt19937_64 rng(2);
  auto p = random_projection(3, 1, rng);
  auto ep = spectral_family_of(p);
  REQUIRE(ep.lambdas.size() == 2);
  CHECK(std::abs(ep.lambdas[0]) < 1e-12);
  CHECK(std::abs(ep.lambdas[1] - 1) < 1e-12);
  CHECK(proj_equal(ep.projections[0], CMatrix::identity(3) - p));
  CHECK(spectral_family_of(CMatrix::identity(3)).lambdas.size() == 1);

  for (int rep = 0; rep < 20; ++rep) {
    auto a = random_hermitian(4, rng);
    const double c = 0.75;
    auto ea = spectral_family_of(a);
    auto ec = spectral_family_of(a + CMatrix::identity(4) * cplx(c));
    REQUIRE(ea.lambdas.size() == ec.lambdas.size());
    for (std::size_t i = 0; i < ea.lambdas.size(); ++i) {
      CHECK(std::abs(ec.lambdas[i] - ea.lambdas[i] - c) < 1e-10);
      CHECK(proj_equal(ea.projections[i], ec.projections[i]));
    }
    CHECK(distance(synthesize(ea), a) < 1e-9);
  }
}

TEST_CASE("projection order and lattice operations") {
  std::mt19937_64 rng(3);
  auto id = CMatrix::identity(3);
  for (int rep = 0; rep < 30; ++rep) {
    auto p = random_projection(3, 1, rng);
    auto q = random_projection(3, 2, rng);
    auto j = proj_join(p, q);
    auto m = proj_meet(p, q);
    CHECK(is_projection(j));
    CHECK(is_projection(m));
    CHECK(proj_leq(p, j));
    CHECK(proj_leq(q, j));
    CHECK(proj_leq(m, p));
    CHECK(proj_leq(m, q));
    CHECK(proj_leq(p, p));
    CHECK(proj_leq(p, id));
    // generic rank-1 and rank-2 projections in dim 3: join I, meet 0
    CHECK(projection_rank(j) == 3);
    CHECK(projection_rank(m) == 0);
    CHECK_FALSE(proj_leq(p, q));
    // p below the join of p with anything
    auto r = proj_join(p, random_projection(3, 1, rng));
    CHECK(proj_leq(p, r));
    CHECK(spectral_leq(p, r) == proj_leq(p, r));
  }
}

TEST_CASE("spectral order") {
  CHECK(spectral_leq(diag({1, 2}), diag({2, 3})));
  CHECK_FALSE(spectral_leq(diag({2, 3}), diag({1, 2})));
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    auto a = random_hermitian(3, rng);
    CHECK(spectral_leq(a, a));
    auto b = random_hermitian(3, rng);
    auto lo = spectral_meet({a, b});
    auto hi = spectral_join({a, b});
    CHECK(spectral_leq(lo, a));
    CHECK(spectral_leq(lo, b));
    CHECK(spectral_leq(a, hi));
    CHECK(spectral_leq(b, hi));
    CHECK(distance(spectral_meet({a, a}), a) < 1e-9);
    CHECK(distance(spectral_join({a, a}), a) < 1e-9);
  }
  // commuting diagonals: entrywise min / max
  for (int rep = 0; rep < 20; ++rep) {
    std::uniform_int_distribution<int> v(-4, 4);
    std::vector<double> x(4), y(4), mn(4), mx(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = v(rng) / 2.0;
      y[i] = v(rng) / 2.0;
      mn[i] = std::min(x[i], y[i]);
      mx[i] = std::max(x[i], y[i]);
    }
    CHECK(distance(spectral_meet({diag(x), diag(y)}), diag(mn)) < 1e-9);
    CHECK(distance(spectral_join({diag(x), diag(y)}), diag(mx)) < 1e-9);
  }
  CHECK_THROWS_AS(spectral_meet({}), InputError);
  CHECK_THROWS_AS(spectral_leq(diag({1, 2}), diag({1, 2, 3})), InputError);
}

TEST_CASE("commutants") {
  auto full = VNSubalgebra::generated_by(3, {});
  CHECK(full.dim() == 1);
  CHECK(full.commutant_basis().size() == 9);

  auto d2 = VNSubalgebra::generated_by(2, {block_projection(2, {0}), block_projection(2, {1})});
  CHECK(d2.dim() == 2);
  CHECK(d2.commutant_basis().size() == 2);
  CHECK(d2.is_abelian());
  CHECK(d2.bicommutant_ok());

  // matrix units generate everything; the commutant is the scalars
  CMatrix e01(3, 3), e12(3, 3);
  e01(0, 1) = 1;
  e12(1, 2) = 1;
  auto m3 = VNSubalgebra::generated_by(3, {e01, e12});
  CHECK(m3.dim() == 9);
  CHECK(m3.commutant_basis().size() == 1);
  CHECK(m3.bicommutant_ok());
  CHECK_FALSE(m3.is_abelian());

  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    auto g = random_hermitian(3, rng);
    auto m = VNSubalgebra::generated_by(3, {g});
    CHECK(m.dim() == 3);  // generic Hermitian: three distinct eigenvalues
    CHECK(m.is_abelian());
    CHECK(m.bicommutant_ok());
    CHECK(m.contains(g * g));
  }
  // block algebra M_2 (+) C in dim 3
  CMatrix b01(3, 3);
  b01(0, 1) = 1;
  auto blk = VNSubalgebra::generated_by(3, {b01, block_projection(3, {2})});
  CHECK(blk.dim() == 5);
  CHECK(blk.commutant_basis().size() == 2);
  CHECK(blk.bicommutant_ok());

  auto inter = VNSubalgebra::intersection(d2, VNSubalgebra::generated_by(2, {}));
  CHECK(inter.dim() == 1);
}

TEST_CASE("core and support") {
  auto d2 = VNSubalgebra::generated_by(2, {block_projection(2, {0})});
  const double h = 1 / std::sqrt(2.0);
  auto q = CMatrix::outer({h, h});
  CHECK(core(d2, q).frobenius() < 1e-12);
  CHECK(distance(support(d2, q), CMatrix::identity(2)) < 1e-12);
  auto p0 = block_projection(2, {0});
  CHECK(distance(core(d2, p0), p0) < 1e-12);
  CHECK(distance(support(d2, p0), p0) < 1e-12);
  CHECK_THROWS_AS(core(d2, diag({2, 0})), InputError);

  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    std::size_t n = 2 + rep % 3;
    auto g = random_hermitian(n, rng);
    auto m = VNSubalgebra::generated_by(n, {g});
    auto qq = random_projection(n, 1 + rep % (n - 1), rng);
    auto c = core(m, qq), s = support(m, qq);
    CHECK(proj_leq(c, qq));
    CHECK(proj_leq(qq, s));
    CHECK(m.contains(c));
    CHECK(m.contains(s));
    // random Q is not in M, so both inequalities are strict
    CHECK_FALSE(proj_equal(c, qq));
    CHECK_FALSE(proj_equal(qq, s));
    // complement identity
    auto id = CMatrix::identity(n);
    CHECK(distance(c + support(m, id - qq), id) < 1e-9);
  }
}

TEST_CASE("restriction maps") {
  std::mt19937_64 rng(7);
  auto scalars = VNSubalgebra::generated_by(3, {});
  for (int rep = 0; rep < 10; ++rep) {
    auto a = random_hermitian(3, rng);
    auto e = eigen_hermitian(a);
    CHECK(distance(rho_restrict(scalars, a), CMatrix::identity(3) * cplx(e.values.back())) < 1e-9);
    CHECK(distance(sigma_restrict(scalars, a), CMatrix::identity(3) * cplx(e.values.front())) < 1e-9);
  }
  // A in M: both maps fix it
  auto g = random_hermitian(3, rng);
  auto m = VNSubalgebra::generated_by(3, {g});
  auto a = g * g - g * cplx(0.5);
  a = hermitian_part(a);
  CHECK(distance(rho_restrict(m, a), a) < 1e-9);
  CHECK(distance(sigma_restrict(m, a), a) < 1e-9);
  // projections: rho Q = support Q
  for (int rep = 0; rep < 20; ++rep) {
    std::size_t n = 2 + rep % 3;
    auto mm = VNSubalgebra::generated_by(n, {random_hermitian(n, rng)});
    auto q = random_projection(n, 1, rng);
    CHECK(distance(rho_restrict(mm, q), support(mm, q)) < 1e-9);
  }
}

TEST_CASE("sampled dominance of sigma and rho") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = random_hermitian(3, rng);
    auto m = VNSubalgebra::generated_by(3, {g});
    auto a = random_hermitian(3, rng);
    auto lo = sigma_restrict(m, a), hi = rho_restrict(m, a);
    CHECK(spectral_leq(lo, a));
    CHECK(spectral_leq(a, hi));
    // elements of M_sa built from g's eigenprojections with random values
    auto eg = spectral_family_of(g);
    for (int k = 0; k < 20; ++k) {
      std::uniform_real_distribution<double> u(-2, 2);
      std::vector<double> vals{u(rng), u(rng), u(rng)};
      std::sort(vals.begin(), vals.end());
      CMatrix b(3, 3), prev(3, 3);
      std::vector<std::size_t> perm{0, 1, 2};
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i < 3; ++i) {
        b += (eg.projections[i] - prev) * cplx(vals[perm[i]]);
        prev = eg.projections[i];
      }
      b = hermitian_part(b);
      if (spectral_leq(b, a)) CHECK(spectral_leq(b, lo));
      if (spectral_leq(a, b)) CHECK(spectral_leq(hi, b));
    }
  }
}

TEST_CASE("nested diagonal algebras: restriction is sup / inf over blocks") {
  std::mt19937_64 rng(9);
  // coarse blocks {0,1}, {2}, {3,4,5} inside the diagonals of dim 6
  std::vector<std::vector<std::size_t>> blocks{{0, 1}, {2}, {3, 4, 5}};
  std::vector<CMatrix> gens;
  for (const auto& b : blocks) gens.push_back(block_projection(6, b));
  auto coarse = VNSubalgebra::generated_by(6, gens);
  CHECK(coarse.dim() == 3);
  for (int rep = 0; rep < 10; ++rep) {
    std::uniform_int_distribution<int> v(-6, 6);
    std::vector<double> d(6);
    for (auto& x : d) x = v(rng) / 2.0;
    std::vector<double> mx(6), mn(6);
    for (const auto& b : blocks) {
      double hi = -1e9, lo = 1e9;
      for (auto i : b) { hi = std::max(hi, d[i]); lo = std::min(lo, d[i]); }
      for (auto i : b) { mx[i] = hi; mn[i] = lo; }
    }
    CHECK(distance(rho_restrict(coarse, diag(d)), diag(mx)) < 1e-9);
    CHECK(distance(sigma_restrict(coarse, diag(d)), diag(mn)) < 1e-9);
  }
}

TEST_CASE("atomic values") {
  CHECK(atomic_value(diag({1, 2}), {0, 1}) == doctest::Approx(2));
  CHECK(atomic_value(diag({1, 2}), {1, 0}) == doctest::Approx(1));
  const double h = 1 / std::sqrt(2.0);
  CHECK(atomic_value(diag({1, 2}), {h, h}) == doctest::Approx(2));
  CHECK_THROWS_AS(atomic_value(diag({1, 2}), {0, 0}), InputError);
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 10; ++rep) {
    auto a = random_hermitian(4, rng);
    auto e = eigen_hermitian(a);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(atomic_value(a, e.vectors.col(k)) == doctest::Approx(e.values[k]).epsilon(1e-9));
      // shift moves the value by the same amount
      CHECK(atomic_value(a + CMatrix::identity(4) * cplx(1.5), e.vectors.col(k)) ==
            doctest::Approx(e.values[k] + 1.5).epsilon(1e-9));
    }
  }
}

TEST_CASE("rho and support are not additive") {
  auto d = nonlinearity_demo();
  CHECK(d.support_gap > 1.0);
  CHECK(d.rho_gap > 1.0);
}
