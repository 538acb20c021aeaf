#pragma once

#include <optional>
#include <vector>

#include "obsfn/matrix.hpp"

namespace obsfn {

// ---- projections ----------------------------------------------------------

/// Hermitian and idempotent within tol.proj (scaled by max(1, max |p_ij|)).
bool is_projection(const CMatrix& p, const Tolerances& tol = {});
/// round(trace).
std::size_t projection_rank(const CMatrix& p);
/// Projection onto the span of the columns of `a`.
CMatrix projector_onto(const CMatrix& a, const Tolerances& tol = {});
/// Orthonormal basis of ran P.
CMatrix range_basis(const CMatrix& p, const Tolerances& tol = {});
/// P <= Q iff ||(I - Q) P|| <= tol.sub.
bool proj_leq(const CMatrix& p, const CMatrix& q, const Tolerances& tol = {});
bool proj_equal(const CMatrix& p, const CMatrix& q, const Tolerances& tol = {});
/// Projection onto ran P + ran Q.
CMatrix proj_join(const CMatrix& p, const CMatrix& q, const Tolerances& tol = {});
/// I - ((I - P) v (I - Q)).
CMatrix proj_meet(const CMatrix& p, const CMatrix& q, const Tolerances& tol = {});

// ---- spectral families of operators ---------------------------------------

/// Clustered breakpoints mu_1 < ... < mu_k with cumulative eigenprojections
/// E_1 < ... < E_k = I.
struct OperatorSpectralFamily {
  std::vector<double> lambdas;
  std::vector<CMatrix> projections;

  std::size_t dim() const { return projections.empty() ? 0 : projections.back().rows(); }
  /// E_i for the largest mu_i <= lambda + tol.cluster; 0 below mu_1.
  CMatrix eval(double lambda, const Tolerances& tol = {}) const;
};

/// Eigenvalues within tol.cluster of their neighbour are merged (the cluster
/// value is the mean); this is the only lossy step of the matrix layer.
OperatorSpectralFamily spectral_family_of(const CMatrix& a, const Tolerances& tol = {});

/// Builds a family from (lambda, projection) pairs with nondecreasing ranges:
/// drops pairs that do not enlarge the range and checks the last one is I.
OperatorSpectralFamily make_family(const std::vector<double>& lambdas,
                                   const std::vector<CMatrix>& projections,
                                   const Tolerances& tol = {});

/// sum mu_i (E_i - E_{i-1}), made exactly Hermitian.
CMatrix synthesize(const OperatorSpectralFamily& e);

/// Sorted union of both breakpoint sets, merged within tol.cluster.
std::vector<double> merged_breakpoints(const std::vector<const OperatorSpectralFamily*>& fams,
                                       const Tolerances& tol = {});

// ---- spectral order -------------------------------------------------------

/// A <=_s B iff E^B_l <= E^A_l at every merged breakpoint l.
bool spectral_leq(const CMatrix& a, const CMatrix& b, const Tolerances& tol = {});
/// Family l -> join_i E^{A_i}_l.
CMatrix spectral_meet(const std::vector<CMatrix>& ops, const Tolerances& tol = {});
/// Family l -> meet_i E^{A_i}_l; already right-continuous for step families.
CMatrix spectral_join(const std::vector<CMatrix>& ops, const Tolerances& tol = {});

// ---- subalgebras ----------------------------------------------------------

/// Unital *-subalgebra of the n x n matrices generated by a finite list.
class VNSubalgebra {
 public:
  /// Span of all words in {I} u gens u gens*.
  static VNSubalgebra generated_by(std::size_t dim, const std::vector<CMatrix>& gens,
                                   const Tolerances& tol = {});
  /// Algebra with the given linear basis (taken as is, orthonormalized).
  static VNSubalgebra from_basis(std::size_t dim, const std::vector<CMatrix>& basis,
                                 const Tolerances& tol = {});

  std::size_t ambient_dim() const { return n_; }
  /// Linear dimension.
  std::size_t dim() const { return basis_.size(); }
  /// Hilbert-Schmidt orthonormal basis.
  const std::vector<CMatrix>& basis() const { return basis_; }
  const std::vector<CMatrix>& generators() const { return gens_; }

  /// Orthonormal basis of M'.
  const std::vector<CMatrix>& commutant_basis() const { return commutant_; }
  VNSubalgebra commutant() const;

  /// Hilbert-Schmidt distance to the span <= tol.rec * max(1, ||X||_F).
  bool contains(const CMatrix& x) const;
  bool is_abelian() const;
  /// M'' = M on the level of spans.
  bool bicommutant_ok() const;

  /// Orthonormal basis of span(M) cap span(N).
  static VNSubalgebra intersection(const VNSubalgebra& m, const VNSubalgebra& n);

  const Tolerances& tolerances() const { return tol_; }

 private:
  std::size_t n_ = 0;
  std::vector<CMatrix> gens_;
  std::vector<CMatrix> basis_;
  std::vector<CMatrix> commutant_;
  Tolerances tol_;
};

/// Orthonormal basis of {X | [X, G] = [X, G*] = 0 for all G in gens}.
std::vector<CMatrix> commutant_basis(std::size_t dim, const std::vector<CMatrix>& gens,
                                     const Tolerances& tol = {});

/// Largest projection of M below Q: the largest M'-invariant subspace of ran Q.
CMatrix core(const VNSubalgebra& m, const CMatrix& q);
/// Smallest projection of M above Q: I - core(I - Q).
CMatrix support(const VNSubalgebra& m, const CMatrix& q);

/// Operator of the family l -> core(E^A_l).
CMatrix rho_restrict(const VNSubalgebra& m, const CMatrix& a);
/// Operator of the family l -> meet_{mu > l} support(E^A_mu) = support(E^A_l).
CMatrix sigma_restrict(const VNSubalgebra& m, const CMatrix& a);

/// Smallest mu_i with x in ran E_i (within tol.sub); x must be nonzero and
/// is normalized first.
double atomic_value(const CMatrix& a, const std::vector<cplx>& x, const Tolerances& tol = {});

/// A concrete instance of support(P + Q) != support(P) + support(Q) for
/// orthogonal P, Q in dim 2 with M the diagonal algebra.
struct NonlinearityDemo {
  CMatrix p, q, support_sum, sum_of_supports, rho_sum, sum_of_rhos;
  double support_gap = 0, rho_gap = 0;
};
NonlinearityDemo nonlinearity_demo(const Tolerances& tol = {});

}  // namespace obsfn
