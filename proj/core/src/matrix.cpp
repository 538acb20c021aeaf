#include "obsfn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "obsfn/error.hpp"

namespace obsfn {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(const std::vector<double>& d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::column(const std::vector<cplx>& v) {
  CMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

CMatrix CMatrix::outer(const std::vector<cplx>& v) {
  CMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

cplx CMatrix::trace() const {
  cplx t = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius() const {
  double s = 0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

double CMatrix::max_abs() const {
  double m = 0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

std::vector<cplx> CMatrix::col(std::size_t j) const {
  std::vector<cplx> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("matrix dimension mismatch in product");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

std::vector<cplx> operator*(const CMatrix& a, const std::vector<cplx>& v) {
  if (a.cols() != v.size()) throw InputError("matrix-vector dimension mismatch");
  std::vector<cplx> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * v[k];
  return out;
}

double norm(const std::vector<cplx>& v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double distance(const CMatrix& a, const CMatrix& b) { return (a - b).frobenius(); }

double spectral_norm(const CMatrix& a, const Tolerances& tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  auto g = hermitian_part(a.adjoint() * a);
  Tolerances loose = tol;
  loose.sym = 1e-8;
  auto e = eigen_hermitian(g, loose);
  return std::sqrt(std::max(0.0, e.values.back()));
}

bool is_hermitian(const CMatrix& a, const Tolerances& tol) {
  if (!a.square()) return false;
  const double bound = tol.sym * std::max(1.0, a.max_abs());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > bound) return false;
  return true;
}

CMatrix hermitian_part(const CMatrix& a) {
  auto h = a + a.adjoint();
  h *= 0.5;
  return h;
}

CMatrix orthonormal_columns(const CMatrix& a, const Tolerances& tol) {
  const std::size_t n = a.rows();
  std::vector<std::vector<cplx>> rest;
  double scale = 0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    rest.push_back(a.col(j));
    scale = std::max(scale, norm(rest.back()));
  }
  const double cut = tol.pivot * std::max(1.0, scale);
  std::vector<std::vector<cplx>> basis;
  while (!rest.empty() && basis.size() < n) {
    std::size_t best = 0;
    double best_norm = -1;
    for (std::size_t j = 0; j < rest.size(); ++j) {
      double nj = norm(rest[j]);
      if (nj > best_norm) { best_norm = nj; best = j; }
    }
    if (best_norm <= cut) break;
    std::vector<cplx> q = rest[best];
    // second pass keeps orthogonality at the 1e-15 level
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        cplx d = 0;
        for (std::size_t i = 0; i < n; ++i) d += std::conj(b[i]) * q[i];
        for (std::size_t i = 0; i < n; ++i) q[i] -= d * b[i];
      }
    }
    double nq = norm(q);
    if (nq <= cut) break;
    for (auto& x : q) x /= nq;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
    for (auto& r : rest) {
      cplx d = 0;
      for (std::size_t i = 0; i < n; ++i) d += std::conj(q[i]) * r[i];
      for (std::size_t i = 0; i < n; ++i) r[i] -= d * q[i];
    }
    basis.push_back(std::move(q));
  }
  CMatrix out(n, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) out(i, j) = basis[j][i];
  return out;
}

CMatrix null_space(const CMatrix& a, const Tolerances& tol) {
  const std::size_t m = a.rows(), n = a.cols();
  CMatrix r = a;
  const double cut = tol.pivot * std::max(1.0, a.max_abs());
  std::vector<std::size_t> pivot_col;
  std::vector<bool> is_pivot(n, false);
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < m; ++c) {
    std::size_t best = row;
    double bv = 0;
    for (std::size_t i = row; i < m; ++i) {
      double v = std::abs(r(i, c));
      if (v > bv) { bv = v; best = i; }
    }
    if (bv <= cut) continue;
    if (best != row)
      for (std::size_t j = 0; j < n; ++j) std::swap(r(row, j), r(best, j));
    const cplx p = r(row, c);
    for (std::size_t j = 0; j < n; ++j) r(row, j) /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      const cplx f = r(i, c);
      if (f == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) -= f * r(row, j);
    }
    pivot_col.push_back(c);
    is_pivot[c] = true;
    ++row;
  }
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  CMatrix raw(n, free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    raw(free_cols[k], k) = 1.0;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) raw(pivot_col[i], k) = -r(i, free_cols[k]);
  }
  return orthonormal_columns(raw, tol);
}

CMatrix hstack(const CMatrix& a, const CMatrix& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) throw InputError("hstack: row mismatch");
  CMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

namespace {

double off_diagonal(const CMatrix& a) {
  double s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigenResult eigen_hermitian(const CMatrix& input, const Tolerances& tol) {
  if (!input.square()) throw InputError("eigen_hermitian: matrix is not square");
  if (!is_hermitian(input, tol)) throw InputError("eigen_hermitian: matrix is not Hermitian");
  const std::size_t n = input.rows();
  CMatrix a = hermitian_part(input);
  CMatrix v = CMatrix::identity(n);
  const double target = tol.offdiag * std::max(1.0, a.frobenius());
  int sweep = 0;
  while (off_diagonal(a) >= target) {
    if (sweep == tol.max_sweeps) throw NumericError("Jacobi did not converge");
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const cplx phase = a(p, q) / mag;  // e^{i phi}
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on rows/cols p, q
        const cplx gpp = c, gpq = s, gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {  // A <- A G
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- G* A
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0;
        a(q, p) = 0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {  // V <- V G
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  EigenResult out;
  out.sweeps = sweep;
  out.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values.push_back(a(order[k], order[k]).real());
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace obsfn
