#pragma once

#include <functional>

#include "tracenorm/types.hpp"

namespace tracenorm::linalg {

// v |-> A v together with its adjoint. The two maps must be consistent:
// <A u, v> == <u, A^T v> up to roundoff for arbitrary probes.
struct LinearOperator {
  Index rows = 0;
  Index cols = 0;
  std::function<Vector(const Vector&)> apply;
  std::function<Vector(const Vector&)> apply_transpose;
};

LinearOperator dense_operator(const Matrix& a);

// Symmetric positive definite matrix. Construction checks symmetry against
// tol::symmetry and positive definiteness through a Cholesky factorization;
// the stored matrix is symmetrized exactly.
class SpdMatrix {
 public:
  SpdMatrix() = default;  // empty 0 x 0 factor
  explicit SpdMatrix(Matrix a);
  static SpdMatrix identity(Index p);

  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  double trace() const { return m_.trace(); }

 private:
  Matrix m_;
};

Matrix sym(const Matrix& a);
Matrix skew(const Matrix& a);

// Orthonormal polar factor A (A^T A)^{-1/2}; the closest matrix with
// orthonormal columns in the Frobenius norm. Throws SingularityError when
// the smallest singular value falls below tol::rank_deficiency relative to
// the largest.
Matrix polar_orthonormal_factor(const Matrix& a);

// Q f(diag) Q^T from a symmetric eigendecomposition. The SpdMatrix overload
// guards functions defined on positive spectra (log, inverse square root).
Matrix sym_apply_function(const Matrix& symmetric, const std::function<double(double)>& fn);
Matrix spd_apply_function(const SpdMatrix& b, const std::function<double(double)>& fn);

// Unique skew-symmetric solution of  Omega B^2 + B^2 Omega = C  for SPD B and
// skew C, via the eigendecomposition of B and elementwise division by the
// pairwise eigenvalue sums of B^2.
Matrix solve_skew_lyapunov(const SpdMatrix& b, const Matrix& c);
// Same solve with a precomputed eigendecomposition B = Q diag(bvals) Q^T.
Matrix solve_skew_lyapunov(const Matrix& q, const Vector& bvals, const Matrix& c);

struct SingularTriplet {
  double sigma = 0.0;
  Vector u;
  Vector v;
  Index iterations = 0;
};

struct ConvergenceError : NumericalError {
  ConvergenceError(const std::string& msg, SingularTriplet best_iterate)
      : NumericalError(msg), best(std::move(best_iterate)) {}
  SingularTriplet best;
};

// Dominant singular value and vectors by alternating power iteration on
// S^T S with a deterministic seeded start vector. On success both residuals
// ||S v - sigma u|| and ||S^T u - sigma v|| are below tol * sigma.
// max_iter == 0 selects the default 10 * max(rows, cols).
SingularTriplet dominant_singular_triplet(const LinearOperator& s,
                                          double tol = tol::triplet,
                                          Index max_iter = 0);

struct Svd {
  Matrix p;      // left factor, orthonormal
  Vector sigma;  // nonincreasing, nonnegative
  Matrix q;      // right factor, orthonormal
};

// Full SVD of a small dense matrix. Each left singular vector is flipped so
// its first significant entry is nonnegative, which pins the factor signs.
Svd small_svd(const Matrix& k);

}  // namespace tracenorm::linalg
