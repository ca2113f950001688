#pragma once

#include <optional>
#include <vector>

#include "tracenorm/geometry.hpp"
#include "tracenorm/kernels.hpp"
#include "tracenorm/linalg.hpp"
#include "tracenorm/types.hpp"

namespace tracenorm::problems {

// Duality gap report for the current point and a scaled dual candidate.
// gap = f(X) + lambda * ||X||_* + psi_star and is nonnegative up to roundoff.
struct GapReport {
  double gap = 0.0;
  double psi_star = 0.0;   // Fenchel conjugate value at the dual candidate
  double sigma_psi = 0.0;  // dominant singular value used for the scaling
  double relative() const {
    const double d = std::abs(psi_star);
    return d > 0 ? gap / d : std::numeric_limits<double>::infinity();
  }
};

// The three products of the dual variable S (the Euclidean gradient of the
// smooth loss at X = U B V^T) with the current factors.
struct GradientProducts {
  Matrix svb;    // S V B,     n x p
  Matrix ut_sv;  // U^T S V,   p x p
  Matrix st_ub;  // S^T U B,   m x p
};

// Contract binding a smooth convex loss f to the fixed-rank geometry.
// Implementations are immutable after construction and all evaluations are
// pure, so concurrent use at different points is safe.
class ProblemModel {
 public:
  virtual ~ProblemModel() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;

  // Smooth loss f at the factored point (including the optional ridge term).
  virtual double loss(const geometry::FixedRankPoint& x) const = 0;

  // f(X) + lambda * Trace(B); Trace(B) is the trace norm of U B V^T.
  double objective(const geometry::FixedRankPoint& x, double lambda) const {
    return loss(x) + lambda * x.trace_b();
  }

  virtual GradientProducts gradient_products(const geometry::FixedRankPoint& x) const = 0;

  // Directional derivative of the Euclidean gradient triple
  // (S V B, U^T S V, S^T U B) along an ambient direction Z; linear in Z.
  virtual geometry::AmbientTriple gradient_directional(const geometry::FixedRankPoint& x,
                                                       const geometry::AmbientTriple& z) const = 0;

  // The dual variable S as a linear operator.
  virtual linalg::LinearOperator dual_operator(const geometry::FixedRankPoint& x) const = 0;

  // Fenchel duality gap with the scaled-gradient dual candidate. When the
  // caller already knows the dominant singular value of the dual operator it
  // can be passed as a hint to avoid recomputation (valid for both shipped
  // models, where the scaling operator applied to the gradient equals S).
  virtual GapReport duality_gap(const geometry::FixedRankPoint& x, double lambda,
                                std::optional<double> sigma_hint = std::nullopt) const = 0;

  // Lipschitz constant of the gradient of f (an upper estimate).
  virtual double lipschitz_estimate() const = 0;

  // Operator norm of the gradient of f at X = 0; the penalty level above
  // which the zero matrix is optimal. Used as the default grid start of the
  // regularization path.
  virtual double gradient_norm_at_zero() const = 0;

  // Dense-matrix access used by the reference solver and desk-scale checks.
  virtual double dense_loss(const Matrix& x) const = 0;
  virtual Matrix dense_gradient(const Matrix& x) const = 0;
  virtual GapReport dense_duality_gap(const Matrix& x, double lambda) const = 0;

  // Euclidean gradient triple of the full objective, including the
  // lambda * I contribution in the middle slot.
  geometry::AmbientTriple euclidean_gradient(const geometry::FixedRankPoint& x,
                                             double lambda) const;
};

// Sparse store of observed entries: coordinate triplets sorted by (row, col)
// with no duplicates, plus the index structures the kernels need.
class ObservedEntries {
 public:
  struct Triplet {
    Index i;
    Index j;
    double value;
  };

  ObservedEntries(Index rows, Index cols, std::vector<Triplet> triplets);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  kernels::SparseLayout layout() const;
  const std::vector<double>& values() const { return values_; }
  const std::vector<Index>& row_indices() const { return row_; }
  const std::vector<Index>& col_indices() const { return col_; }

  // Frobenius norm of the observed data (values on the mask).
  double values_norm() const;

 private:
  Index rows_, cols_;
  std::vector<Index> row_, col_, row_ptr_, csc_perm_, col_ptr_;
  std::vector<double> values_;
};

// || W o (X_obs - U B V^T) ||_F^2 + lambda Trace(B), evaluated only at the
// observed entries. An optional ridge mu * ||X||_F^2 makes the loss strictly
// convex; it is carried exactly through the gradient, the dual operator and
// the duality gap.
class MatrixCompletionModel : public ProblemModel {
 public:
  explicit MatrixCompletionModel(ObservedEntries data, double ridge = 0.0);

  Index rows() const override { return data_.rows(); }
  Index cols() const override { return data_.cols(); }
  const ObservedEntries& data() const { return data_; }
  double ridge() const { return ridge_; }

  double loss(const geometry::FixedRankPoint& x) const override;
  GradientProducts gradient_products(const geometry::FixedRankPoint& x) const override;
  geometry::AmbientTriple gradient_directional(const geometry::FixedRankPoint& x,
                                               const geometry::AmbientTriple& z) const override;
  linalg::LinearOperator dual_operator(const geometry::FixedRankPoint& x) const override;
  GapReport duality_gap(const geometry::FixedRankPoint& x, double lambda,
                        std::optional<double> sigma_hint = std::nullopt) const override;
  double lipschitz_estimate() const override { return 2.0 + 2.0 * ridge_; }
  double gradient_norm_at_zero() const override;

  double dense_loss(const Matrix& x) const override;
  Matrix dense_gradient(const Matrix& x) const override;
  GapReport dense_duality_gap(const Matrix& x, double lambda) const override;

  // Residual values 2 * ((U B V^T)_k - value_k) on the mask; the entries of
  // the sparse part of the dual variable.
  std::vector<double> dual_values(const geometry::FixedRankPoint& x) const;

  // Training error || W o (X_obs - X) ||_F^2 (no ridge, no penalty).
  double masked_residual_sq(const geometry::FixedRankPoint& x) const;

 private:
  ObservedEntries data_;
  double ridge_;
};

// Inputs of a multivariate linear regression; the Gram and cross products
// are formed once so per-iteration work no longer touches the tall matrices.
struct RegressionData {
  Matrix x;  // n x q inputs
  Matrix y;  // n x k responses
  bool scaled = false;  // divide the quadratic loss by n*k
  double ridge = 0.0;
};

// || Y - X W ||_F^2 (optionally scaled by 1/(n k)) + lambda ||W||_* over
// coefficient matrices W = U B V^T of size q x k.
class MultivariateRegressionModel : public ProblemModel {
 public:
  explicit MultivariateRegressionModel(RegressionData data);

  Index rows() const override { return gram_.rows(); }  // q
  Index cols() const override { return cross_.cols(); } // k
  double scale() const { return scale_; }
  double ridge() const { return ridge_; }
  const Matrix& gram() const { return gram_; }
  const Matrix& cross() const { return cross_; }

  double loss(const geometry::FixedRankPoint& x) const override;
  GradientProducts gradient_products(const geometry::FixedRankPoint& x) const override;
  geometry::AmbientTriple gradient_directional(const geometry::FixedRankPoint& x,
                                               const geometry::AmbientTriple& z) const override;
  linalg::LinearOperator dual_operator(const geometry::FixedRankPoint& x) const override;
  GapReport duality_gap(const geometry::FixedRankPoint& x, double lambda,
                        std::optional<double> sigma_hint = std::nullopt) const override;
  double lipschitz_estimate() const override { return lipschitz_; }
  double gradient_norm_at_zero() const override;

  double dense_loss(const Matrix& w) const override;
  Matrix dense_gradient(const Matrix& w) const override;
  GapReport dense_duality_gap(const Matrix& w, double lambda) const override;

  // Dense dual variable S = 2 c (X^T X W - X^T Y) + 2 mu W; q x k.
  Matrix dense_dual(const geometry::FixedRankPoint& x) const;

 private:
  Matrix x_, y_;
  Matrix gram_, cross_;
  double y_sqnorm_;
  double scale_;
  double ridge_;
  double lipschitz_;
};

// Root mean square prediction error sqrt(||Y - X W||_F^2 / (n k)).
double regression_rmse(const Matrix& x, const Matrix& y, const geometry::FixedRankPoint& w);

// || L R^T - U B V^T ||_F / || L R^T ||_F without forming dense products.
double relative_reconstruction_error(const Matrix& l, const Matrix& r,
                                     const geometry::FixedRankPoint& x);

}  // namespace tracenorm::problems
