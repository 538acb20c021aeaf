#include "obsfn/sampling.hpp"

#include <algorithm>
#include <set>

namespace obsfn {

SpectralFamily random_family(const LatticePtr& l, ElementId top, std::mt19937_64& rng) {
  std::vector<ElementId> chain;
  ElementId cur = l->zero();
  while (cur != top) {
    std::vector<ElementId> above;
    for (ElementId e = 0; e < l->size(); ++e) {
      if (l->lt(cur, e) && l->leq(e, top)) above.push_back(e);
    }
    // bias towards short steps so long chains show up too
    std::uniform_int_distribution<std::size_t> pick(0, above.size() - 1);
    ElementId next = above[pick(rng)];
    if (std::bernoulli_distribution(0.5)(rng)) {
      for (auto e : above) {
        if (l->lt(e, next) || e == next) {
          bool cover = true;
          for (auto f : above) cover = cover && !l->lt(f, e);
          if (cover) { next = e; break; }
        }
      }
    }
    chain.push_back(next);
    cur = next;
  }
  std::set<int> halves;
  std::uniform_int_distribution<int> lam(-20, 20);
  while (halves.size() < chain.size()) halves.insert(lam(rng));
  std::vector<Breakpoint> bps;
  auto it = halves.begin();
  for (auto e : chain) bps.push_back({*it++ / 2.0, e});
  return SpectralFamily(l, top, bps);
}

SpectralFamily random_family(const LatticePtr& l, std::mt19937_64& rng) {
  return random_family(l, l->one(), rng);
}

}  // namespace obsfn

namespace obsfn {

namespace {

CMatrix random_complex(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = cplx(u(rng), u(rng));
  return m;
}

}  // namespace

CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  return hermitian_part(random_complex(n, n, rng));
}

CMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    auto q = orthonormal_columns(random_complex(n, n, rng));
    if (q.cols() == n) return q;
  }
}

CMatrix random_projection(std::size_t n, std::size_t rank, std::mt19937_64& rng) {
  if (rank == 0) return CMatrix(n, n);
  auto u = random_unitary(n, rng);
  CMatrix cols(n, rank);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < rank; ++j) cols(i, j) = u(i, j);
  return hermitian_part(cols * cols.adjoint());
}

}  // namespace obsfn
