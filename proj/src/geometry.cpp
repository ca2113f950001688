#include "tracenorm/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cassert>
#include <cmath>

namespace tracenorm::geometry {

namespace {

void check_shapes(const FixedRankPoint& x, const Matrix& zu, const Matrix& zb, const Matrix& zv,
                  const char* who) {
  require_dims(zu.rows() == x.rows() && zu.cols() == x.rank() && zb.rows() == x.rank() &&
                   zb.cols() == x.rank() && zv.rows() == x.cols() && zv.cols() == x.rank(),
               who);
}

double tangency_defect(const FixedRankPoint& x, const TangentVector& t) {
  double d = linalg::sym(x.u().transpose() * t.z_u).norm();
  d = std::max(d, linalg::sym(x.v().transpose() * t.z_v).norm());
  d = std::max(d, (t.z_b - t.z_b.transpose()).norm());
  return d;
}

double tangent_scale(const TangentVector& t) {
  return std::max({1.0, t.z_u.norm(), t.z_b.norm(), t.z_v.norm()});
}

}  // namespace

FixedRankPoint::FixedRankPoint(Matrix u, linalg::SpdMatrix b, Matrix v)
    : u_(std::move(u)), v_(std::move(v)), b_(std::move(b)) {
  const Index p = b_.dim();
  require_dims(u_.cols() == p && v_.cols() == p && u_.rows() >= p && v_.rows() >= p,
               "FixedRankPoint: inconsistent factor shapes");
  const Matrix iu = u_.transpose() * u_ - Matrix::Identity(p, p);
  const Matrix iv = v_.transpose() * v_ - Matrix::Identity(p, p);
  if (iu.norm() > tol::orthonormality || iv.norm() > tol::orthonormality)
    throw PreconditionError("FixedRankPoint: factor columns are not orthonormal");

  if (p == 0) {
    b_q_ = b_sqrt_ = b_inv_sqrt_ = b_inv_ = Matrix(0, 0);
    b_lam_ = Vector(0);
    return;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b_.matrix());
  if (eig.info() != Eigen::Success)
    throw NumericalError("FixedRankPoint: eigendecomposition of B failed");
  b_q_ = eig.eigenvectors();
  b_lam_ = eig.eigenvalues();
  if (b_lam_(0) <= 0.0)
    throw PreconditionError("FixedRankPoint: B is not positive definite");
  const Vector sqrt_lam = b_lam_.array().sqrt();
  b_sqrt_ = b_q_ * sqrt_lam.asDiagonal() * b_q_.transpose();
  b_inv_sqrt_ = b_q_ * sqrt_lam.asDiagonal().inverse() * b_q_.transpose();
  b_inv_ = b_q_ * b_lam_.asDiagonal().inverse() * b_q_.transpose();
}

TangentVector& TangentVector::operator+=(const TangentVector& o) {
  z_u += o.z_u;
  z_b += o.z_b;
  z_v += o.z_v;
  horizontal = horizontal && o.horizontal;
  return *this;
}

TangentVector& TangentVector::operator-=(const TangentVector& o) {
  z_u -= o.z_u;
  z_b -= o.z_b;
  z_v -= o.z_v;
  horizontal = horizontal && o.horizontal;
  return *this;
}

TangentVector& TangentVector::operator*=(double s) {
  z_u *= s;
  z_b *= s;
  z_v *= s;
  return *this;
}

TangentVector operator+(TangentVector a, const TangentVector& b) { return a += b; }
TangentVector operator-(TangentVector a, const TangentVector& b) { return a -= b; }
TangentVector operator*(double s, TangentVector a) { return a *= s; }
TangentVector operator-(TangentVector a) { return a *= -1.0; }

TangentVector zero_tangent(const FixedRankPoint& x) {
  const Index p = x.rank();
  return TangentVector{Matrix::Zero(x.rows(), p), Matrix::Zero(p, p), Matrix::Zero(x.cols(), p),
                       true};
}

double metric_inner(const FixedRankPoint& x, const TangentVector& xi, const TangentVector& eta) {
  check_shapes(x, xi.z_u, xi.z_b, xi.z_v, "metric_inner: direction does not match base point");
  check_shapes(x, eta.z_u, eta.z_b, eta.z_v, "metric_inner: direction does not match base point");
  const Matrix a = x.b_inv() * xi.z_b;
  const Matrix b = x.b_inv() * eta.z_b;
  return xi.z_u.cwiseProduct(eta.z_u).sum() + a.cwiseProduct(b.transpose()).sum() +
         xi.z_v.cwiseProduct(eta.z_v).sum();
}

double metric_norm(const FixedRankPoint& x, const TangentVector& xi) {
  return std::sqrt(std::max(0.0, metric_inner(x, xi, xi)));
}

TangentVector project_to_tangent(const FixedRankPoint& x, const AmbientTriple& z) {
  check_shapes(x, z.u, z.b, z.v, "project_to_tangent: shape mismatch");
  TangentVector t;
  t.z_u = z.u - x.u() * linalg::sym(x.u().transpose() * z.u);
  t.z_b = linalg::sym(z.b);
  t.z_v = z.v - x.v() * linalg::sym(x.v().transpose() * z.v);
  t.horizontal = false;
  return t;
}

Matrix horizontal_defect(const FixedRankPoint& x, const TangentVector& eta) {
  const Matrix& b = x.b().matrix();
  const Matrix rhs = b *
                     (linalg::skew(x.u().transpose() * eta.z_u) -
                      2.0 * linalg::skew(x.b_inv() * eta.z_b) +
                      linalg::skew(x.v().transpose() * eta.z_v)) *
                     b;
  return linalg::solve_skew_lyapunov(x.b_eigvecs(), x.b_eigvals(), rhs);
}

TangentVector project_to_horizontal(const FixedRankPoint& x, const TangentVector& eta) {
  check_shapes(x, eta.z_u, eta.z_b, eta.z_v, "project_to_horizontal: shape mismatch");
  if (tangency_defect(x, eta) > 1e-8 * tangent_scale(eta))
    throw PreconditionError("project_to_horizontal: direction is not tangent");
  const Matrix omega = horizontal_defect(x, eta);
  const Matrix& b = x.b().matrix();
  TangentVector out;
  out.z_u = eta.z_u - x.u() * omega;
  out.z_b = eta.z_b - (b * omega - omega * b);
  out.z_v = eta.z_v - x.v() * omega;
  out.horizontal = true;
  return out;
}

TangentVector egrad_to_rgrad(const FixedRankPoint& x, const AmbientTriple& g) {
  TangentVector t = project_to_tangent(x, g);
  t.z_b = x.b().matrix() * t.z_b * x.b().matrix();
  return t;
}

AmbientTriple rgrad_field_directional(const FixedRankPoint& x, const TangentVector& xi,
                                      const AmbientTriple& egrad,
                                      const AmbientTriple& egrad_dot) {
  check_shapes(x, xi.z_u, xi.z_b, xi.z_v, "rgrad_field_directional: shape mismatch");
  const Matrix& b = x.b().matrix();
  AmbientTriple d;
  d.u = egrad_dot.u - xi.z_u * linalg::sym(x.u().transpose() * egrad.u) -
        x.u() * linalg::sym(xi.z_u.transpose() * egrad.u + x.u().transpose() * egrad_dot.u);
  d.b = xi.z_b * linalg::sym(egrad.b) * b + b * linalg::sym(egrad_dot.b) * b +
        b * linalg::sym(egrad.b) * xi.z_b;
  d.v = egrad_dot.v - xi.z_v * linalg::sym(x.v().transpose() * egrad.v) -
        x.v() * linalg::sym(xi.z_v.transpose() * egrad.v + x.v().transpose() * egrad_dot.v);
  return d;
}

TangentVector apply_hessian(const FixedRankPoint& x, const TangentVector& xi,
                            const TangentVector& rgrad, const AmbientTriple& rgrad_dot) {
  require(xi.horizontal, "apply_hessian: direction must be horizontal");
#ifndef NDEBUG
  assert(horizontal_defect(x, xi).norm() <= 1e-8 * std::max(1.0, metric_norm(x, xi)));
#endif
  TangentVector first = project_to_tangent(x, rgrad_dot);
  AmbientTriple corr;
  corr.u = xi.z_u * linalg::sym(x.u().transpose() * rgrad.z_u);
  corr.b = linalg::sym(xi.z_b * x.b_inv() * rgrad.z_b);
  corr.v = xi.z_v * linalg::sym(x.v().transpose() * rgrad.z_v);
  TangentVector second = project_to_tangent(x, corr);
  first -= second;
  first.horizontal = false;
  return project_to_horizontal(x, first);
}

TangentVector apply_hessian(const FixedRankPoint& x, const TangentVector& xi,
                            const GradField& field) {
  auto [g, dg] = field(xi);
  return apply_hessian(x, xi, g, dg);
}

FixedRankPoint retract(const FixedRankPoint& x, const TangentVector& xi) {
  check_shapes(x, xi.z_u, xi.z_b, xi.z_v, "retract: shape mismatch");
  if (!xi.z_u.allFinite() || !xi.z_b.allFinite() || !xi.z_v.allFinite())
    throw SingularityError("retract: non-finite direction");
  Matrix u_new = linalg::polar_orthonormal_factor(x.u() + xi.z_u);
  Matrix v_new = linalg::polar_orthonormal_factor(x.v() + xi.z_v);
  const Matrix inner = linalg::sym(x.b_inv_sqrt() * xi.z_b * x.b_inv_sqrt());
  const Matrix expm = linalg::sym_apply_function(inner, [](double t) { return std::exp(t); });
  Matrix b_new = x.b_sqrt() * expm * x.b_sqrt();
  if (!b_new.allFinite()) throw SingularityError("retract: scaling factor overflow");
  return FixedRankPoint(std::move(u_new), linalg::SpdMatrix(linalg::sym(b_new)),
                        std::move(v_new));
}

TangentVector inverse_retract_approx(const FixedRankPoint& x, const FixedRankPoint& from) {
  require_dims(x.rows() == from.rows() && x.cols() == from.cols() && x.rank() == from.rank(),
               "inverse_retract_approx: points live on different spaces");
  AmbientTriple raw;
  raw.u = from.u() - x.u();
  raw.v = from.v() - x.v();
  const Matrix inner =
      linalg::sym(x.b_inv_sqrt() * from.b().matrix() * x.b_inv_sqrt());
  const Matrix logm = linalg::sym_apply_function(inner, [](double t) { return std::log(t); });
  raw.b = x.b_sqrt() * logm * x.b_sqrt();
  return project_to_horizontal(x, project_to_tangent(x, raw));
}

}  // namespace tracenorm::geometry
