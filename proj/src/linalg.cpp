#include "tracenorm/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

#include "tracenorm/rng.hpp"

namespace tracenorm::linalg {

namespace {
constexpr std::uint64_t kTripletSeed = 0x5137ab11dba5e00dULL;
}

LinearOperator dense_operator(const Matrix& a) {
  LinearOperator op;
  op.rows = a.rows();
  op.cols = a.cols();
  op.apply = [a](const Vector& v) -> Vector { return a * v; };
  op.apply_transpose = [a](const Vector& u) -> Vector { return a.transpose() * u; };
  return op;
}

SpdMatrix::SpdMatrix(Matrix a) {
  require_dims(a.rows() == a.cols(), "SpdMatrix: square matrix required");
  const double scale = a.norm();
  if ((a - a.transpose()).norm() > tol::symmetry * std::max(1.0, scale))
    throw PreconditionError("SpdMatrix: matrix is not symmetric");
  m_ = 0.5 * (a + a.transpose());
  if (m_.rows() > 0) {
    Eigen::LLT<Matrix> llt(m_);
    if (llt.info() != Eigen::Success)
      throw PreconditionError("SpdMatrix: matrix is not positive definite");
  }
}

SpdMatrix SpdMatrix::identity(Index p) { return SpdMatrix(Matrix::Identity(p, p)); }

Matrix sym(const Matrix& a) {
  require_dims(a.rows() == a.cols(), "sym: square matrix required");
  return 0.5 * (a + a.transpose());
}

Matrix skew(const Matrix& a) {
  require_dims(a.rows() == a.cols(), "skew: square matrix required");
  return 0.5 * (a - a.transpose());
}

Matrix polar_orthonormal_factor(const Matrix& a) {
  require_dims(a.cols() <= a.rows(), "polar factor: need cols <= rows");
  const Matrix gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericalError("polar factor: eigendecomposition failed");
  const Vector& lam = eig.eigenvalues();  // ascending
  const double sigma_max = std::sqrt(std::max(lam(lam.size() - 1), 0.0));
  const double sigma_min = lam(0) > 0 ? std::sqrt(lam(0)) : 0.0;
  if (sigma_min <= tol::rank_deficiency * sigma_max || sigma_max == 0.0)
    throw SingularityError("polar factor: rank-deficient input");
  Vector inv_sqrt = lam.array().sqrt().inverse();
  return a * (eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose());
}

Matrix sym_apply_function(const Matrix& symmetric, const std::function<double(double)>& fn) {
  require_dims(symmetric.rows() == symmetric.cols(), "sym_apply_function: square matrix required");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric);
  if (eig.info() != Eigen::Success)
    throw NumericalError("sym_apply_function: eigendecomposition failed");
  Vector mapped(eig.eigenvalues().size());
  for (Index i = 0; i < mapped.size(); ++i) mapped(i) = fn(eig.eigenvalues()(i));
  Matrix out = eig.eigenvectors() * mapped.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

Matrix spd_apply_function(const SpdMatrix& b, const std::function<double(double)>& fn) {
  return sym_apply_function(b.matrix(), fn);
}

Matrix solve_skew_lyapunov(const Matrix& q, const Vector& bvals, const Matrix& c) {
  const Index p = c.rows();
  require_dims(c.cols() == p && q.rows() == p && bvals.size() == p,
               "lyapunov: dimension mismatch");
  if ((c + c.transpose()).norm() > tol::symmetry * std::max(1.0, c.norm()))
    throw PreconditionError("lyapunov: right-hand side is not skew-symmetric");
  const Matrix ct = q.transpose() * c * q;
  Matrix omega(p, p);
  for (Index i = 0; i < p; ++i) {
    omega(i, i) = 0.0;
    for (Index j = i + 1; j < p; ++j) {
      const double d = bvals(i) * bvals(i) + bvals(j) * bvals(j);
      omega(i, j) = ct(i, j) / d;
      omega(j, i) = -omega(i, j);
    }
  }
  Matrix out = q * omega * q.transpose();
  return 0.5 * (out - out.transpose());
}

Matrix solve_skew_lyapunov(const SpdMatrix& b, const Matrix& c) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b.matrix());
  if (eig.info() != Eigen::Success) throw NumericalError("lyapunov: eigendecomposition failed");
  return solve_skew_lyapunov(eig.eigenvectors(), eig.eigenvalues(), c);
}

SingularTriplet dominant_singular_triplet(const LinearOperator& s, double tol, Index max_iter) {
  require(s.rows > 0 && s.cols > 0 && s.apply && s.apply_transpose,
          "dominant_singular_triplet: operator not fully specified");
  // The 10 * dimension budget is right for large operators; small ones with
  // clustered spectra need an iteration count independent of the dimension.
  if (max_iter <= 0) max_iter = std::max<Index>(5000, 10 * std::max(s.rows, s.cols));

  auto eng = rng::engine(rng::mix(kTripletSeed ^ (static_cast<std::uint64_t>(s.rows) << 20) ^
                                  static_cast<std::uint64_t>(s.cols)));
  Vector v = rng::gaussian(s.cols, 1, eng).col(0);
  v.normalize();

  SingularTriplet best;
  double best_res = std::numeric_limits<double>::infinity();

  Vector u(s.rows);
  for (Index it = 1; it <= max_iter; ++it) {
    Vector w = s.apply(v);
    const double sigma_u = w.norm();
    if (sigma_u == 0.0) {
      // Operator annihilates the probe; treat as (numerically) zero.
      u.setZero();
      u(0) = 1.0;
      Vector v0 = Vector::Zero(s.cols);
      v0(0) = 1.0;
      return SingularTriplet{0.0, u, v0, it};
    }
    u = w / sigma_u;
    Vector z = s.apply_transpose(u);
    const double sigma = z.norm();
    if (sigma == 0.0) {
      Vector v0 = Vector::Zero(s.cols);
      v0(0) = 1.0;
      return SingularTriplet{0.0, u, v0, it};
    }
    const double res_v = (z - sigma_u * v).norm();  // ||S^T u - sigma v|| with previous v
    v = z / sigma;

    if (res_v <= tol * sigma) {
      // Confirm both residuals explicitly before accepting.
      Vector sv = s.apply(v);
      const double r1 = (sv - sigma * u).norm();
      Vector stu = s.apply_transpose(u);
      const double r2 = (stu - sigma * v).norm();
      if (r1 <= tol * sigma && r2 <= tol * sigma)
        return SingularTriplet{sigma, u, v, it};
      const double res = std::max(r1, r2);
      if (res < best_res) {
        best_res = res;
        best = SingularTriplet{sigma, u, v, it};
      }
    } else if (res_v < best_res) {
      best_res = res_v;
      best = SingularTriplet{sigma, u, v, it};
    }
  }
  best.iterations = max_iter;
  throw ConvergenceError("dominant_singular_triplet: no convergence within max_iter", best);
}

Svd small_svd(const Matrix& k) {
  Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  for (Index j = 0; j < out.p.cols(); ++j) {
    const double colmax = out.p.col(j).cwiseAbs().maxCoeff();
    for (Index i = 0; i < out.p.rows(); ++i) {
      if (std::abs(out.p(i, j)) > 1e-8 * colmax) {
        if (out.p(i, j) < 0) {
          out.p.col(j) = -out.p.col(j);
          if (j < out.q.cols()) out.q.col(j) = -out.q.col(j);
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace tracenorm::linalg
