#include "obsfn/vn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "obsfn/error.hpp"

namespace obsfn {

namespace {

cplx hs_inner(const CMatrix& a, const CMatrix& b) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::conj(a(i, j)) * b(i, j);
  return s;
}

void require_square(const CMatrix& a, const char* what) {
  if (!a.square() || a.rows() == 0) throw InputError(std::string(what) + ": expected a nonempty square matrix");
}

void require_same_dim(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("dimension mismatch");
}

// Gram-Schmidt step against an orthonormal list; appends if independent.
bool add_independent(std::vector<CMatrix>& basis, CMatrix y, const Tolerances& tol) {
  const double scale = std::max(1.0, y.frobenius());
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      cplx d = hs_inner(b, y);
      y -= b * d;
    }
  }
  double ny = y.frobenius();
  if (ny <= tol.pivot * scale) return false;
  y *= 1.0 / ny;
  basis.push_back(std::move(y));
  return true;
}

double commutator_norm(const CMatrix& x, const CMatrix& y) { return (x * y - y * x).frobenius(); }

void check_in_algebra(const VNSubalgebra& m, const CMatrix& x, const char* what) {
  const double bound = m.tolerances().rec * std::max(1.0, x.frobenius());
  for (const auto& g : m.commutant_basis()) {
    if (commutator_norm(x, g) > bound) {
      throw ConsistencyError(std::string(what) + " does not commute with the commutant");
    }
  }
}

}  // namespace

// ---- projections ----------------------------------------------------------

bool is_projection(const CMatrix& p, const Tolerances& tol) {
  if (!p.square()) return false;
  Tolerances t = tol;
  t.sym = tol.proj;
  if (!is_hermitian(p, t)) return false;
  return (p * p - p).max_abs() <= tol.proj * std::max(1.0, p.max_abs());
}

std::size_t projection_rank(const CMatrix& p) {
  return static_cast<std::size_t>(std::llround(std::max(0.0, p.trace().real())));
}

CMatrix projector_onto(const CMatrix& a, const Tolerances& tol) {
  auto q = orthonormal_columns(a, tol);
  if (q.cols() == 0) return CMatrix(a.rows(), a.rows());
  return hermitian_part(q * q.adjoint());
}

CMatrix range_basis(const CMatrix& p, const Tolerances& tol) { return orthonormal_columns(p, tol); }

bool proj_leq(const CMatrix& p, const CMatrix& q, const Tolerances& tol) {
  require_same_dim(p, q);
  auto x = (CMatrix::identity(p.rows()) - q) * p;
  const double f = x.frobenius();
  if (f <= tol.sub) return true;
  // scale first so the eigen solve of X*X works at unit size
  x *= 1.0 / f;
  return f * spectral_norm(x, tol) <= tol.sub;
}

bool proj_equal(const CMatrix& p, const CMatrix& q, const Tolerances& tol) {
  return proj_leq(p, q, tol) && proj_leq(q, p, tol);
}

CMatrix proj_join(const CMatrix& p, const CMatrix& q, const Tolerances& tol) {
  require_same_dim(p, q);
  return projector_onto(hstack(range_basis(p, tol), range_basis(q, tol)), tol);
}

CMatrix proj_meet(const CMatrix& p, const CMatrix& q, const Tolerances& tol) {
  const auto id = CMatrix::identity(p.rows());
  return hermitian_part(id - proj_join(id - p, id - q, tol));
}

// ---- spectral families of operators ---------------------------------------

CMatrix OperatorSpectralFamily::eval(double lambda, const Tolerances& tol) const {
  CMatrix out(dim(), dim());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] > lambda + tol.cluster) break;
    out = projections[i];
  }
  return out;
}

OperatorSpectralFamily spectral_family_of(const CMatrix& a, const Tolerances& tol) {
  require_square(a, "spectral_family_of");
  auto eig = eigen_hermitian(a, tol);
  const std::size_t n = a.rows();
  OperatorSpectralFamily out;
  CMatrix cum(n, n);
  std::size_t k = 0;
  while (k < n) {
    std::size_t end = k + 1;
    while (end < n && eig.values[end] - eig.values[end - 1] <= tol.cluster) ++end;
    double mean = 0;
    for (std::size_t i = k; i < end; ++i) {
      mean += eig.values[i];
      cum += CMatrix::outer(eig.vectors.col(i));
    }
    out.lambdas.push_back(mean / static_cast<double>(end - k));
    out.projections.push_back(hermitian_part(cum));
    k = end;
  }
  return out;
}

OperatorSpectralFamily make_family(const std::vector<double>& lambdas,
                                   const std::vector<CMatrix>& projections,
                                   const Tolerances& tol) {
  if (lambdas.empty() || lambdas.size() != projections.size()) {
    throw InputError("make_family: need matching nonempty lists");
  }
  const std::size_t n = projections.front().rows();
  OperatorSpectralFamily out;
  std::size_t prev_rank = 0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (i > 0 && !(lambdas[i - 1] < lambdas[i])) throw InputError("make_family: lambdas not increasing");
    const auto& p = projections[i];
    if (!is_projection(p, tol)) throw ConsistencyError("make_family: value is not a projection");
    std::size_t r = projection_rank(p);
    if (!out.projections.empty() && !proj_leq(out.projections.back(), p, tol)) {
      throw ConsistencyError("make_family: values not increasing");
    }
    if (r == prev_rank) continue;
    out.lambdas.push_back(lambdas[i]);
    out.projections.push_back(p);
    prev_rank = r;
  }
  if (prev_rank != n) throw ConsistencyError("make_family: last value is not the identity");
  return out;
}

CMatrix synthesize(const OperatorSpectralFamily& e) {
  const std::size_t n = e.dim();
  CMatrix out(n, n);
  CMatrix prev(n, n);
  for (std::size_t i = 0; i < e.lambdas.size(); ++i) {
    out += (e.projections[i] - prev) * cplx(e.lambdas[i]);
    prev = e.projections[i];
  }
  return hermitian_part(out);
}

std::vector<double> merged_breakpoints(const std::vector<const OperatorSpectralFamily*>& fams,
                                       const Tolerances& tol) {
  std::vector<double> all;
  for (const auto* f : fams) all.insert(all.end(), f->lambdas.begin(), f->lambdas.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double x : all) {
    // clusters are represented by their largest member
    if (!out.empty() && x - out.back() <= tol.cluster) {
      out.back() = x;
    } else {
      out.push_back(x);
    }
  }
  return out;
}

// ---- spectral order -------------------------------------------------------

bool spectral_leq(const CMatrix& a, const CMatrix& b, const Tolerances& tol) {
  require_same_dim(a, b);
  auto ea = spectral_family_of(a, tol);
  auto eb = spectral_family_of(b, tol);
  for (double l : merged_breakpoints({&ea, &eb}, tol)) {
    if (!proj_leq(eb.eval(l, tol), ea.eval(l, tol), tol)) return false;
  }
  return true;
}

namespace {

template <typename Combine>
CMatrix spectral_combine(const std::vector<CMatrix>& ops, const Tolerances& tol, Combine combine) {
  if (ops.empty()) throw InputError("spectral meet/join of an empty list");
  std::vector<OperatorSpectralFamily> fams;
  for (const auto& a : ops) {
    require_same_dim(a, ops.front());
    fams.push_back(spectral_family_of(a, tol));
  }
  std::vector<const OperatorSpectralFamily*> ptrs;
  for (const auto& f : fams) ptrs.push_back(&f);
  auto ls = merged_breakpoints(ptrs, tol);
  std::vector<CMatrix> ps;
  for (double l : ls) {
    CMatrix p = fams.front().eval(l, tol);
    for (std::size_t i = 1; i < fams.size(); ++i) p = combine(p, fams[i].eval(l, tol));
    ps.push_back(p);
  }
  return synthesize(make_family(ls, ps, tol));
}

}  // namespace

CMatrix spectral_meet(const std::vector<CMatrix>& ops, const Tolerances& tol) {
  return spectral_combine(ops, tol, [&](const CMatrix& p, const CMatrix& q) { return proj_join(p, q, tol); });
}

CMatrix spectral_join(const std::vector<CMatrix>& ops, const Tolerances& tol) {
  return spectral_combine(ops, tol, [&](const CMatrix& p, const CMatrix& q) { return proj_meet(p, q, tol); });
}

// ---- subalgebras ----------------------------------------------------------

std::vector<CMatrix> commutant_basis(std::size_t n, const std::vector<CMatrix>& gens,
                                     const Tolerances& tol) {
  std::vector<CMatrix> all;
  for (const auto& g : gens) {
    if (g.rows() != n || g.cols() != n) throw InputError("generator has wrong dimension");
    all.push_back(g);
    all.push_back(g.adjoint());
  }
  const std::size_t nn = n * n;
  CMatrix sys(std::max<std::size_t>(1, all.size() * nn), nn);
  std::size_t row = 0;
  for (const auto& g : all) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b, ++row) {
        // ([X, G])_ab = sum_k X_ak G_kb - G_ak X_kb
        for (std::size_t k = 0; k < n; ++k) {
          sys(row, a * n + k) += g(k, b);
          sys(row, k * n + b) -= g(a, k);
        }
      }
    }
  }
  auto ns = null_space(sys, tol);
  std::vector<CMatrix> out;
  for (std::size_t c = 0; c < ns.cols(); ++c) {
    CMatrix x(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) x(i, j) = ns(i * n + j, c);
    out.push_back(std::move(x));
  }
  return out;
}

VNSubalgebra VNSubalgebra::generated_by(std::size_t dim, const std::vector<CMatrix>& gens,
                                        const Tolerances& tol) {
  if (dim == 0 || dim > 16) throw InputError("ambient dimension must be in 1..16");
  VNSubalgebra m;
  m.n_ = dim;
  m.tol_ = tol;
  std::vector<CMatrix> letters;
  for (const auto& g : gens) {
    if (g.rows() != dim || g.cols() != dim) throw InputError("generator has wrong dimension");
    letters.push_back(g);
    letters.push_back(g.adjoint());
  }
  m.gens_ = gens;
  std::deque<std::size_t> frontier;
  if (add_independent(m.basis_, CMatrix::identity(dim), tol)) frontier.push_back(0);
  for (const auto& g : letters) {
    if (add_independent(m.basis_, g, tol)) frontier.push_back(m.basis_.size() - 1);
  }
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop_front();
    for (const auto& g : letters) {
      CMatrix y = g * m.basis_[i];
      if (add_independent(m.basis_, std::move(y), tol)) frontier.push_back(m.basis_.size() - 1);
    }
  }
  m.commutant_ = obsfn::commutant_basis(dim, gens, tol);
  return m;
}

VNSubalgebra VNSubalgebra::from_basis(std::size_t dim, const std::vector<CMatrix>& basis,
                                      const Tolerances& tol) {
  return generated_by(dim, basis, tol);
}

VNSubalgebra VNSubalgebra::commutant() const { return from_basis(n_, commutant_, tol_); }

bool VNSubalgebra::contains(const CMatrix& x) const {
  if (x.rows() != n_ || x.cols() != n_) return false;
  CMatrix r = x;
  for (const auto& b : basis_) r -= b * hs_inner(b, x);
  return r.frobenius() <= tol_.rec * std::max(1.0, x.frobenius());
}

bool VNSubalgebra::is_abelian() const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t j = i + 1; j < basis_.size(); ++j)
      if (commutator_norm(basis_[i], basis_[j]) > tol_.rec) return false;
  return true;
}

bool VNSubalgebra::bicommutant_ok() const {
  auto cc = obsfn::commutant_basis(n_, commutant_, tol_);
  if (cc.size() != basis_.size()) return false;
  return std::all_of(cc.begin(), cc.end(), [&](const CMatrix& x) { return contains(x); });
}

VNSubalgebra VNSubalgebra::intersection(const VNSubalgebra& m, const VNSubalgebra& n) {
  if (m.n_ != n.n_) throw InputError("intersection of algebras in different dimensions");
  const std::size_t nn = m.n_ * m.n_;
  // columns: residual of each basis element of m after projecting onto n
  CMatrix sys(nn, m.basis_.size());
  for (std::size_t c = 0; c < m.basis_.size(); ++c) {
    CMatrix r = m.basis_[c];
    for (const auto& b : n.basis_) r -= b * hs_inner(b, m.basis_[c]);
    for (std::size_t i = 0; i < m.n_; ++i)
      for (std::size_t j = 0; j < m.n_; ++j) sys(i * m.n_ + j, c) = r(i, j);
  }
  auto ns = null_space(sys, m.tol_);
  std::vector<CMatrix> basis;
  for (std::size_t k = 0; k < ns.cols(); ++k) {
    CMatrix x(m.n_, m.n_);
    for (std::size_t c = 0; c < m.basis_.size(); ++c) x += m.basis_[c] * ns(c, k);
    basis.push_back(std::move(x));
  }
  return from_basis(m.n_, basis, m.tol_);
}

CMatrix core(const VNSubalgebra& m, const CMatrix& q) {
  const auto& tol = m.tolerances();
  if (q.rows() != m.ambient_dim() || !is_projection(q, tol)) throw InputError("core: argument is not a projection");
  const std::size_t n = q.rows();
  CMatrix u = range_basis(q, tol);
  for (std::size_t step = 0; step <= n && u.cols() > 0; ++step) {
    const CMatrix outside = CMatrix::identity(n) - u * u.adjoint();
    const auto& gs = m.commutant_basis();
    CMatrix stacked(gs.size() * n, u.cols());
    for (std::size_t g = 0; g < gs.size(); ++g) {
      CMatrix block = outside * gs[g] * u;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < u.cols(); ++j) stacked(g * n + i, j) = block(i, j);
    }
    CMatrix keep = null_space(stacked, tol);
    if (keep.cols() == u.cols()) break;
    u = keep.cols() == 0 ? CMatrix(n, 0) : orthonormal_columns(u * keep, tol);
  }
  CMatrix out = u.cols() == 0 ? CMatrix(n, n) : projector_onto(u, tol);
  check_in_algebra(m, out, "core");
  return out;
}

CMatrix support(const VNSubalgebra& m, const CMatrix& q) {
  const auto id = CMatrix::identity(q.rows());
  if (q.rows() != m.ambient_dim() || !is_projection(q, m.tolerances())) {
    throw InputError("support: argument is not a projection");
  }
  return hermitian_part(id - core(m, id - q));
}

CMatrix rho_restrict(const VNSubalgebra& m, const CMatrix& a) {
  auto e = spectral_family_of(a, m.tolerances());
  std::vector<CMatrix> ps;
  for (const auto& p : e.projections) ps.push_back(core(m, p));
  auto out = synthesize(make_family(e.lambdas, ps, m.tolerances()));
  check_in_algebra(m, out, "rho_restrict");
  return out;
}

CMatrix sigma_restrict(const VNSubalgebra& m, const CMatrix& a) {
  auto e = spectral_family_of(a, m.tolerances());
  std::vector<CMatrix> ps;
  for (const auto& p : e.projections) ps.push_back(support(m, p));
  auto out = synthesize(make_family(e.lambdas, ps, m.tolerances()));
  check_in_algebra(m, out, "sigma_restrict");
  return out;
}

double atomic_value(const CMatrix& a, const std::vector<cplx>& x, const Tolerances& tol) {
  const double nx = norm(x);
  if (nx == 0.0) throw InputError("atomic_value: zero vector");
  std::vector<cplx> u = x;
  for (auto& c : u) c /= nx;
  auto e = spectral_family_of(a, tol);
  for (std::size_t i = 0; i < e.lambdas.size(); ++i) {
    auto r = u;
    auto pu = e.projections[i] * u;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= pu[k];
    if (norm(r) <= tol.sub) return e.lambdas[i];
  }
  return e.lambdas.back();
}

NonlinearityDemo nonlinearity_demo(const Tolerances& tol) {
  auto m = VNSubalgebra::generated_by(2, {CMatrix::diagonal({1.0, 0.0})}, tol);
  const double h = 1.0 / std::sqrt(2.0);
  NonlinearityDemo d;
  d.p = CMatrix::outer({h, h});
  d.q = CMatrix::outer({h, -h});
  d.support_sum = support(m, d.p + d.q);
  d.sum_of_supports = support(m, d.p) + support(m, d.q);
  d.rho_sum = rho_restrict(m, d.p + d.q);
  d.sum_of_rhos = rho_restrict(m, d.p) + rho_restrict(m, d.q);
  d.support_gap = distance(d.support_sum, d.sum_of_supports);
  d.rho_gap = distance(d.rho_sum, d.sum_of_rhos);
  return d;
}

}  // namespace obsfn
