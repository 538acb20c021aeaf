#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace obsfn {

using cplx = std::complex<double>;

/// Numeric tolerances; every comparison in the matrix layer names one of these.
struct Tolerances {
  double sym = 1e-12;      // Hermitian check (relative to max(1, max |a_ij|))
  double proj = 1e-10;     // idempotence / Hermitian for projections
  double rec = 1e-9;       // reconstruction residual, Frobenius
  double sub = 1e-9;       // subspace containment, sine of largest principal angle
  double cluster = 1e-8;   // eigenvalue clustering gap
  double pivot = 1e-10;    // rank decisions in orthonormalization / elimination
  double offdiag = 1e-11;  // Jacobi stopping rule, off-diagonal Frobenius
  int max_sweeps = 100;
};

/// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(const std::vector<double>& d);
  /// Column matrix from a vector.
  static CMatrix column(const std::vector<cplx>& v);
  /// |v><v|.
  static CMatrix outer(const std::vector<cplx>& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  CMatrix adjoint() const;
  cplx trace() const;
  double frobenius() const;
  double max_abs() const;
  std::vector<cplx> col(std::size_t j) const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

std::vector<cplx> operator*(const CMatrix& a, const std::vector<cplx>& v);
double norm(const std::vector<cplx>& v);

/// Frobenius distance.
double distance(const CMatrix& a, const CMatrix& b);
/// Largest singular value.
double spectral_norm(const CMatrix& a, const Tolerances& tol = {});

/// max |a_ij - conj(a_ji)| <= tol.sym * max(1, max |a_ij|).
bool is_hermitian(const CMatrix& a, const Tolerances& tol = {});
/// (A + A*) / 2.
CMatrix hermitian_part(const CMatrix& a);

/// Orthonormal basis (as columns) of the span of the columns of `a`,
/// by Gram-Schmidt with column pivoting; columns whose residual norm falls
/// below tol.pivot * max(1, largest column norm) are dropped.
CMatrix orthonormal_columns(const CMatrix& a, const Tolerances& tol = {});

/// Orthonormal basis (as columns) of the null space of `a`, by complex
/// reduced row echelon form with partial pivoting.
CMatrix null_space(const CMatrix& a, const Tolerances& tol = {});

/// Horizontal concatenation.
CMatrix hstack(const CMatrix& a, const CMatrix& b);

struct EigenResult {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column k belongs to values[k]
  int sweeps = 0;
};

/// Cyclic complex Jacobi. Throws InputError if `a` is not Hermitian and
/// NumericError if the off-diagonal mass does not fall below tol.offdiag
/// (scaled by max(1, ||A||_F)) within tol.max_sweeps sweeps.
EigenResult eigen_hermitian(const CMatrix& a, const Tolerances& tol = {});

}  // namespace obsfn
