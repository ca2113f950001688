#pragma once

#include <functional>
#include <utility>

#include "tracenorm/linalg.hpp"
#include "tracenorm/types.hpp"

// Geometry of rank-p matrices factored as X = U B V^T with orthonormal U, V
// and symmetric positive definite B. The factorization is invariant under
// simultaneous rotation (U O, O^T B O, V O); computations are carried out in
// the product space while the horizontal projection removes the rotational
// redundancy. All operations stay within O(n p^2 + m p^2 + p^3) per call and
// never materialize an n x m intermediate.

namespace tracenorm::geometry {

class FixedRankPoint {
 public:
  FixedRankPoint() = default;  // the empty rank-0 point
  FixedRankPoint(Matrix u, linalg::SpdMatrix b, Matrix v);

  Index rows() const { return u_.rows(); }
  Index cols() const { return v_.rows(); }
  Index rank() const { return b_.dim(); }

  const Matrix& u() const { return u_; }
  const Matrix& v() const { return v_; }
  const linalg::SpdMatrix& b() const { return b_; }
  double trace_b() const { return b_.trace(); }

  // Factors derived from the eigendecomposition of B, computed once at
  // construction so points are immutable and freely shareable across threads.
  const Matrix& b_sqrt() const { return b_sqrt_; }
  const Matrix& b_inv_sqrt() const { return b_inv_sqrt_; }
  const Matrix& b_inv() const { return b_inv_; }
  const Matrix& b_eigvecs() const { return b_q_; }
  const Vector& b_eigvals() const { return b_lam_; }

  // Dense n x m reconstruction; for tests and desk-scale diagnostics only.
  Matrix to_dense() const { return u_ * b_.matrix() * v_.transpose(); }

  // Frobenius norm of U B V^T, available without forming the product.
  double frobenius_norm() const { return b_.matrix().norm(); }

 private:
  Matrix u_, v_;
  linalg::SpdMatrix b_;
  Matrix b_sqrt_, b_inv_sqrt_, b_inv_, b_q_;
  Vector b_lam_;
};

// An unconstrained direction (Z_U, Z_B, Z_V) in the ambient product space;
// also used for Euclidean gradients and their directional derivatives.
struct AmbientTriple {
  Matrix u, b, v;
};

// Tangent direction at a point: Sym(U^T z_u) = 0, z_b symmetric,
// Sym(V^T z_v) = 0. The `horizontal` flag records that the direction is
// orthogonal to the rotational (vertical) directions; linear combinations
// preserve it, so inner solvers track it cheaply instead of re-projecting.
struct TangentVector {
  Matrix z_u, z_b, z_v;
  bool horizontal = false;

  TangentVector& operator+=(const TangentVector& o);
  TangentVector& operator-=(const TangentVector& o);
  TangentVector& operator*=(double s);
};

TangentVector operator+(TangentVector a, const TangentVector& b);
TangentVector operator-(TangentVector a, const TangentVector& b);
TangentVector operator*(double s, TangentVector a);
TangentVector operator-(TangentVector a);

TangentVector zero_tangent(const FixedRankPoint& x);

// Riemannian metric: Trace(z_u^T w_u) + Trace(B^-1 z_b B^-1 w_b)
// + Trace(z_v^T w_v).
double metric_inner(const FixedRankPoint& x, const TangentVector& xi, const TangentVector& eta);
double metric_norm(const FixedRankPoint& x, const TangentVector& xi);

// Orthogonal projection of an ambient triple onto the tangent space.
// Idempotent.
TangentVector project_to_tangent(const FixedRankPoint& x, const AmbientTriple& z);

// Projection onto the horizontal space: removes the rotational component
// (U Omega, B Omega - Omega B, V Omega) where the skew matrix Omega solves
// Omega B^2 + B^2 Omega = B (Skew(U^T z_u) - 2 Skew(B^-1 z_b)
//                              + Skew(V^T z_v)) B.
TangentVector project_to_horizontal(const FixedRankPoint& x, const TangentVector& eta);

// The skew multiplier Omega of the horizontal projection; zero exactly when
// the vector is already horizontal. Exposed for debug verification of the
// horizontal flag.
Matrix horizontal_defect(const FixedRankPoint& x, const TangentVector& eta);

// Converts the Euclidean gradient triple of a cost into the gradient for the
// quotient metric: tangent projection followed by the B-scaling
// grad_B = B Sym(G_B) B of the middle slot.
TangentVector egrad_to_rgrad(const FixedRankPoint& x, const AmbientTriple& g);

// Directional derivative of the gradient field x |-> egrad_to_rgrad(x, G(x))
// along xi, given G at x and its Euclidean directional derivative along xi.
// Product-rule terms from the projection and B-scaling are handled here.
AmbientTriple rgrad_field_directional(const FixedRankPoint& x, const TangentVector& xi,
                                      const AmbientTriple& egrad, const AmbientTriple& egrad_dot);

// Hessian of the cost applied to a horizontal direction: the tangent
// projection of the gradient-field derivative minus the connection
// correction, projected back to the horizontal space. Linear in xi and
// self-adjoint in the metric.
TangentVector apply_hessian(const FixedRankPoint& x, const TangentVector& xi,
                            const TangentVector& rgrad, const AmbientTriple& rgrad_dot);

// Convenience overload taking a field callback that yields the gradient and
// its ambient directional derivative along xi.
using GradField =
    std::function<std::pair<TangentVector, AmbientTriple>(const TangentVector& xi)>;
TangentVector apply_hessian(const FixedRankPoint& x, const TangentVector& xi,
                            const GradField& field);

// Retraction: polar factor on the orthonormal slots, exponential scaling on
// the positive definite slot. R_x(0) = x and the map agrees with the
// exponential map to second order.
FixedRankPoint retract(const FixedRankPoint& x, const TangentVector& xi);

// First-order estimate of the direction pointing from `x` toward `from`
// (approximate inverse of the retraction followed by tangent and horizontal
// projection). Exact in flat directions; O(distance^2) error otherwise.
TangentVector inverse_retract_approx(const FixedRankPoint& x, const FixedRankPoint& from);

}  // namespace tracenorm::geometry
