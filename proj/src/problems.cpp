#include "tracenorm/problems.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <memory>

namespace tracenorm::problems {

geometry::AmbientTriple ProblemModel::euclidean_gradient(const geometry::FixedRankPoint& x,
                                                         double lambda) const {
  GradientProducts gp = gradient_products(x);
  geometry::AmbientTriple g;
  g.u = std::move(gp.svb);
  g.b = std::move(gp.ut_sv);
  g.b.diagonal().array() += lambda;
  g.v = std::move(gp.st_ub);
  return g;
}

ObservedEntries::ObservedEntries(Index rows, Index cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols) {
  require_dims(rows >= 0 && cols >= 0, "ObservedEntries: negative dimensions");
  for (const Triplet& t : triplets) {
    if (t.i < 0 || t.i >= rows || t.j < 0 || t.j >= cols)
      throw ParameterError("ObservedEntries: index out of range");
    if (!std::isfinite(t.value)) throw ParameterError("ObservedEntries: non-finite value");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (size_t k = 1; k < triplets.size(); ++k)
    if (triplets[k].i == triplets[k - 1].i && triplets[k].j == triplets[k - 1].j)
      throw ParameterError("ObservedEntries: duplicate entry");

  const Index nnz = static_cast<Index>(triplets.size());
  row_.resize(nnz);
  col_.resize(nnz);
  values_.resize(nnz);
  for (Index k = 0; k < nnz; ++k) {
    row_[k] = triplets[k].i;
    col_[k] = triplets[k].j;
    values_[k] = triplets[k].value;
  }
  row_ptr_.assign(rows_ + 1, 0);
  for (Index k = 0; k < nnz; ++k) ++row_ptr_[row_[k] + 1];
  for (Index i = 0; i < rows_; ++i) row_ptr_[i + 1] += row_ptr_[i];

  csc_perm_.resize(nnz);
  col_ptr_.assign(cols_ + 1, 0);
  for (Index k = 0; k < nnz; ++k) ++col_ptr_[col_[k] + 1];
  for (Index j = 0; j < cols_; ++j) col_ptr_[j + 1] += col_ptr_[j];
  std::vector<Index> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
  for (Index k = 0; k < nnz; ++k) csc_perm_[cursor[col_[k]]++] = k;
}

kernels::SparseLayout ObservedEntries::layout() const {
  kernels::SparseLayout l;
  l.rows = rows_;
  l.cols = cols_;
  l.nnz = nnz();
  l.row = row_.data();
  l.col = col_.data();
  l.row_ptr = row_ptr_.data();
  l.csc_perm = csc_perm_.data();
  l.col_ptr = col_ptr_.data();
  return l;
}

double ObservedEntries::values_norm() const {
  return std::sqrt(kernels::sum_squares(values_.data(), nnz()));
}

namespace {

// Linear operator view of the sparse matrix carried by (entries, vals).
linalg::LinearOperator mask_operator(const ObservedEntries& entries,
                                     std::shared_ptr<const std::vector<double>> vals) {
  linalg::LinearOperator op;
  op.rows = entries.rows();
  op.cols = entries.cols();
  op.apply = [&entries, vals](const Vector& v) -> Vector {
    RowMatrix d = v;
    RowMatrix out;
    kernels::sparse_dense(entries.layout(), vals->data(), d, out);
    return out.col(0);
  };
  op.apply_transpose = [&entries, vals](const Vector& u) -> Vector {
    RowMatrix d = u;
    RowMatrix out;
    kernels::sparse_dense_transpose(entries.layout(), vals->data(), d, out);
    return out.col(0);
  };
  return op;
}

Matrix sparse_times(const ObservedEntries& entries, const std::vector<double>& vals,
                    const Matrix& d) {
  RowMatrix drm = d;
  RowMatrix out;
  kernels::sparse_dense(entries.layout(), vals.data(), drm, out);
  return out;
}

Matrix sparse_transpose_times(const ObservedEntries& entries, const std::vector<double>& vals,
                              const Matrix& d) {
  RowMatrix drm = d;
  RowMatrix out;
  kernels::sparse_dense_transpose(entries.layout(), vals.data(), drm, out);
  return out;
}

double nuclear_norm_dense(const Matrix& x) {
  return Eigen::JacobiSVD<Matrix>(x).singularValues().sum();
}

double operator_norm_dense(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues()(0);
}

}  // namespace

MatrixCompletionModel::MatrixCompletionModel(ObservedEntries data, double ridge)
    : data_(std::move(data)), ridge_(ridge) {
  require(ridge >= 0.0, "MatrixCompletionModel: ridge must be nonnegative");
}

std::vector<double> MatrixCompletionModel::dual_values(const geometry::FixedRankPoint& x) const {
  require_dims(x.rows() == rows() && x.cols() == cols(), "matrix completion: shape mismatch");
  std::vector<double> out(data_.nnz());
  RowMatrix l = x.u() * x.b().matrix();
  RowMatrix r = x.v();
  kernels::gather_residual(data_.layout(), l, r, data_.values().data(), 2.0, out.data());
  return out;
}

double MatrixCompletionModel::masked_residual_sq(const geometry::FixedRankPoint& x) const {
  std::vector<double> res(data_.nnz());
  RowMatrix l = x.u() * x.b().matrix();
  RowMatrix r = x.v();
  kernels::gather_residual(data_.layout(), l, r, data_.values().data(), 1.0, res.data());
  return kernels::sum_squares(res.data(), data_.nnz());
}

double MatrixCompletionModel::loss(const geometry::FixedRankPoint& x) const {
  double f = masked_residual_sq(x);
  if (ridge_ > 0.0) f += ridge_ * x.b().matrix().squaredNorm();
  return f;
}

GradientProducts MatrixCompletionModel::gradient_products(
    const geometry::FixedRankPoint& x) const {
  const std::vector<double> vals = dual_values(x);
  const Matrix& b = x.b().matrix();
  Matrix sv = sparse_times(data_, vals, x.v());
  Matrix stu = sparse_transpose_times(data_, vals, x.u());
  GradientProducts gp;
  gp.svb = sv * b;
  gp.ut_sv = x.u().transpose() * sv;
  gp.st_ub = stu * b;
  if (ridge_ > 0.0) {
    const Matrix b2 = b * b;
    gp.svb += 2.0 * ridge_ * x.u() * b2;
    gp.ut_sv += 2.0 * ridge_ * b;
    gp.st_ub += 2.0 * ridge_ * x.v() * b2;
  }
  return gp;
}

geometry::AmbientTriple MatrixCompletionModel::gradient_directional(
    const geometry::FixedRankPoint& x, const geometry::AmbientTriple& z) const {
  require_dims(z.u.rows() == rows() && z.v.rows() == cols() && z.u.cols() == x.rank() &&
                   z.b.rows() == x.rank() && z.v.cols() == x.rank(),
               "matrix completion: direction shape mismatch");
  const Matrix& u = x.u();
  const Matrix& v = x.v();
  const Matrix& b = x.b().matrix();
  const std::vector<double> vals = dual_values(x);

  // Directional derivative of the sparse dual variable along z.
  std::vector<double> star(data_.nnz()), tmp(data_.nnz());
  {
    RowMatrix l1 = z.u * b + u * z.b;
    RowMatrix r1 = v;
    kernels::gather_product(data_.layout(), l1, r1, star.data());
    RowMatrix l2 = u * b;
    RowMatrix r2 = z.v;
    kernels::gather_product(data_.layout(), l2, r2, tmp.data());
    for (Index k = 0; k < data_.nnz(); ++k) star[k] = 2.0 * (star[k] + tmp[k]);
  }

  Matrix sv = sparse_times(data_, vals, v);
  Matrix szv = sparse_times(data_, vals, z.v);
  Matrix starv = sparse_times(data_, star, v);
  Matrix stu = sparse_transpose_times(data_, vals, u);
  Matrix stzu = sparse_transpose_times(data_, vals, z.u);
  Matrix startu = sparse_transpose_times(data_, star, u);

  geometry::AmbientTriple d;
  d.u = sv * z.b + szv * b + starv * b;
  d.b = z.u.transpose() * sv + u.transpose() * szv + u.transpose() * starv;
  d.v = stu * z.b + stzu * b + startu * b;

  if (ridge_ > 0.0) {
    const double c = 2.0 * ridge_;
    const Matrix vtzv = v.transpose() * z.v;
    const Matrix utzu = u.transpose() * z.u;
    const Matrix dv = z.u * b + u * z.b + u * b * vtzv.transpose();
    const Matrix dtu = v * b * utzu.transpose() + v * z.b.transpose() + z.v * b;
    d.u += c * (u * b * z.b + u * b * vtzv * b + dv * b);
    d.b += c * (utzu.transpose() * b + b * vtzv + u.transpose() * dv);
    d.v += c * (v * b * z.b + v * b * utzu * b + dtu * b);
  }
  return d;
}

linalg::LinearOperator MatrixCompletionModel::dual_operator(
    const geometry::FixedRankPoint& x) const {
  auto vals = std::make_shared<const std::vector<double>>(dual_values(x));
  linalg::LinearOperator sparse = mask_operator(data_, vals);
  if (ridge_ <= 0.0) return sparse;
  // Add the low-rank ridge contribution 2 mu U B V^T.
  const double mu = ridge_;
  Matrix u = x.u(), v = x.v(), b = x.b().matrix();
  linalg::LinearOperator op;
  op.rows = sparse.rows;
  op.cols = sparse.cols;
  op.apply = [sparse, u, v, b, mu](const Vector& w) -> Vector {
    return sparse.apply(w) + 2.0 * mu * (u * (b * (v.transpose() * w)));
  };
  op.apply_transpose = [sparse, u, v, b, mu](const Vector& w) -> Vector {
    return sparse.apply_transpose(w) + 2.0 * mu * (v * (b * (u.transpose() * w)));
  };
  return op;
}

GapReport MatrixCompletionModel::duality_gap(const geometry::FixedRankPoint& x, double lambda,
                                             std::optional<double> sigma_hint) const {
  const std::vector<double> g1 = dual_values(x);
  double sigma = sigma_hint ? *sigma_hint : 0.0;
  if (!sigma_hint) {
    auto vals = std::make_shared<const std::vector<double>>(g1);
    linalg::LinearOperator op =
        ridge_ > 0.0 ? dual_operator(x) : mask_operator(data_, vals);
    sigma = linalg::dominant_singular_triplet(op).sigma;
  }
  const double c = sigma > lambda ? lambda / sigma : 1.0;
  const Index nnz = data_.nnz();
  double psi = 0.25 * c * c * kernels::sum_squares(g1.data(), nnz) +
               c * kernels::dot(g1.data(), data_.values().data(), nnz);
  if (ridge_ > 0.0) psi += c * c * ridge_ * x.b().matrix().squaredNorm();
  GapReport rep;
  rep.sigma_psi = sigma;
  rep.psi_star = psi;
  rep.gap = objective(x, lambda) + psi;
  return rep;
}

double MatrixCompletionModel::gradient_norm_at_zero() const {
  std::vector<double> vals(data_.values());
  for (double& v : vals) v *= -2.0;
  auto shared = std::make_shared<const std::vector<double>>(std::move(vals));
  try {
    return linalg::dominant_singular_triplet(mask_operator(data_, shared), 1e-6).sigma;
  } catch (const linalg::ConvergenceError& e) {
    return e.best.sigma;  // a scale estimate is all that is needed here
  }
}

double MatrixCompletionModel::dense_loss(const Matrix& x) const {
  require_dims(x.rows() == rows() && x.cols() == cols(), "matrix completion: shape mismatch");
  double f = 0.0;
  const auto& rows_idx = data_.row_indices();
  const auto& cols_idx = data_.col_indices();
  const auto& vals = data_.values();
  for (Index k = 0; k < data_.nnz(); ++k) {
    const double r = vals[k] - x(rows_idx[k], cols_idx[k]);
    f += r * r;
  }
  if (ridge_ > 0.0) f += ridge_ * x.squaredNorm();
  return f;
}

Matrix MatrixCompletionModel::dense_gradient(const Matrix& x) const {
  require_dims(x.rows() == rows() && x.cols() == cols(), "matrix completion: shape mismatch");
  Matrix g = Matrix::Zero(rows(), cols());
  const auto& rows_idx = data_.row_indices();
  const auto& cols_idx = data_.col_indices();
  const auto& vals = data_.values();
  for (Index k = 0; k < data_.nnz(); ++k) {
    const Index i = rows_idx[k], j = cols_idx[k];
    g(i, j) = 2.0 * (x(i, j) - vals[k]);
  }
  if (ridge_ > 0.0) g += 2.0 * ridge_ * x;
  return g;
}

GapReport MatrixCompletionModel::dense_duality_gap(const Matrix& x, double lambda) const {
  const Matrix grad = dense_gradient(x);
  const double sigma = operator_norm_dense(grad);
  const double c = sigma > lambda ? lambda / sigma : 1.0;
  const auto& rows_idx = data_.row_indices();
  const auto& cols_idx = data_.col_indices();
  const auto& vals = data_.values();
  double psi = 0.0;
  for (Index k = 0; k < data_.nnz(); ++k) {
    const Index i = rows_idx[k], j = cols_idx[k];
    const double g1 = 2.0 * (x(i, j) - vals[k]);
    psi += 0.25 * c * c * g1 * g1 + c * g1 * vals[k];
  }
  if (ridge_ > 0.0) psi += c * c * ridge_ * x.squaredNorm();
  GapReport rep;
  rep.sigma_psi = sigma;
  rep.psi_star = psi;
  rep.gap = dense_loss(x) + lambda * nuclear_norm_dense(x) + psi;
  return rep;
}

MultivariateRegressionModel::MultivariateRegressionModel(RegressionData data)
    : x_(std::move(data.x)), y_(std::move(data.y)), ridge_(data.ridge) {
  require_dims(x_.rows() == y_.rows(), "regression: X and Y row counts differ");
  require(ridge_ >= 0.0, "regression: ridge must be nonnegative");
  gram_ = x_.transpose() * x_;
  cross_ = x_.transpose() * y_;
  y_sqnorm_ = y_.squaredNorm();
  scale_ = data.scaled ? 1.0 / static_cast<double>(x_.rows() * y_.cols()) : 1.0;
  const double gram_top = linalg::dominant_singular_triplet(linalg::dense_operator(gram_)).sigma;
  lipschitz_ = 2.0 * scale_ * gram_top + 2.0 * ridge_;
}

double MultivariateRegressionModel::loss(const geometry::FixedRankPoint& w) const {
  require_dims(w.rows() == rows() && w.cols() == cols(), "regression: shape mismatch");
  // Residual evaluated directly; the Gram shortcut loses precision once the
  // fit is many orders below ||Y||^2.
  const Matrix xu = x_ * w.u();
  const Matrix resid = xu * w.b().matrix() * w.v().transpose() - y_;
  double f = scale_ * resid.squaredNorm();
  if (ridge_ > 0.0) f += ridge_ * w.b().matrix().squaredNorm();
  return f;
}

GradientProducts MultivariateRegressionModel::gradient_products(
    const geometry::FixedRankPoint& w) const {
  require_dims(w.rows() == rows() && w.cols() == cols(), "regression: shape mismatch");
  const Matrix& b = w.b().matrix();
  const Matrix t = gram_ * w.u();  // q x p
  const double c = 2.0 * scale_;
  Matrix sv = c * (t * b - cross_ * w.v());
  Matrix stu = c * (w.v() * (b * (t.transpose() * w.u())) - cross_.transpose() * w.u());
  if (ridge_ > 0.0) {
    sv += 2.0 * ridge_ * w.u() * b;
    stu += 2.0 * ridge_ * w.v() * b;
  }
  GradientProducts gp;
  gp.svb = sv * b;
  gp.ut_sv = w.u().transpose() * sv;
  gp.st_ub = stu * b;
  return gp;
}

geometry::AmbientTriple MultivariateRegressionModel::gradient_directional(
    const geometry::FixedRankPoint& w, const geometry::AmbientTriple& z) const {
  require_dims(z.u.rows() == rows() && z.v.rows() == cols(), "regression: direction mismatch");
  const Matrix& u = w.u();
  const Matrix& v = w.v();
  const Matrix& b = w.b().matrix();
  const double c = 2.0 * scale_;
  const Matrix t = gram_ * u;            // q x p
  const Matrix utt = u.transpose() * t;  // p x p
  const Matrix vtzv = v.transpose() * z.v;
  const Matrix utzu = u.transpose() * z.u;

  Matrix sv = c * (t * b - cross_ * v);
  Matrix szv = c * (t * (b * vtzv) - cross_ * z.v);
  Matrix stu = c * (v * (b * utt) - cross_.transpose() * u);
  Matrix stzu = c * (v * (b * (t.transpose() * z.u)) - cross_.transpose() * z.u);

  const Matrix dv = z.u * b + u * z.b + u * (b * vtzv.transpose());
  const Matrix dtu = v * (b * utzu.transpose()) + v * z.b.transpose() + z.v * b;
  Matrix starv = c * (gram_ * dv);
  Matrix startu =
      c * (v * (b * (z.u.transpose() * t)) + v * (z.b.transpose() * utt) + z.v * (b * utt));

  if (ridge_ > 0.0) {
    const double m = 2.0 * ridge_;
    sv += m * u * b;
    szv += m * u * (b * vtzv);
    stu += m * v * b;
    stzu += m * v * (b * utzu);
    starv += m * dv;
    startu += m * dtu;
  }

  geometry::AmbientTriple d;
  d.u = sv * z.b + szv * b + starv * b;
  d.b = z.u.transpose() * sv + u.transpose() * szv + u.transpose() * starv;
  d.v = stu * z.b + stzu * b + startu * b;
  return d;
}

Matrix MultivariateRegressionModel::dense_dual(const geometry::FixedRankPoint& w) const {
  const Matrix t = gram_ * w.u();
  Matrix s = 2.0 * scale_ * (t * w.b().matrix() * w.v().transpose() - cross_);
  if (ridge_ > 0.0) s += 2.0 * ridge_ * w.u() * w.b().matrix() * w.v().transpose();
  return s;
}

linalg::LinearOperator MultivariateRegressionModel::dual_operator(
    const geometry::FixedRankPoint& w) const {
  return linalg::dense_operator(dense_dual(w));
}

GapReport MultivariateRegressionModel::duality_gap(const geometry::FixedRankPoint& w,
                                                   double lambda,
                                                   std::optional<double> sigma_hint) const {
  const Matrix xu = x_ * w.u();
  const Matrix grad_psi = 2.0 * scale_ * (xu * w.b().matrix() * w.v().transpose() - y_);
  const double sigma =
      sigma_hint ? *sigma_hint
                 : linalg::dominant_singular_triplet(dual_operator(w)).sigma;
  const double c = sigma > lambda ? lambda / sigma : 1.0;
  double psi = 0.25 * c * c / scale_ * grad_psi.squaredNorm() +
               c * grad_psi.cwiseProduct(y_).sum();
  if (ridge_ > 0.0) psi += c * c * ridge_ * w.b().matrix().squaredNorm();
  GapReport rep;
  rep.sigma_psi = sigma;
  rep.psi_star = psi;
  rep.gap = objective(w, lambda) + psi;
  return rep;
}

double MultivariateRegressionModel::gradient_norm_at_zero() const {
  try {
    return 2.0 * scale_ *
           linalg::dominant_singular_triplet(linalg::dense_operator(cross_), 1e-6).sigma;
  } catch (const linalg::ConvergenceError& e) {
    return 2.0 * scale_ * e.best.sigma;
  }
}

double MultivariateRegressionModel::dense_loss(const Matrix& w) const {
  require_dims(w.rows() == rows() && w.cols() == cols(), "regression: shape mismatch");
  double f = scale_ * (x_ * w - y_).squaredNorm();
  if (ridge_ > 0.0) f += ridge_ * w.squaredNorm();
  return f;
}

Matrix MultivariateRegressionModel::dense_gradient(const Matrix& w) const {
  require_dims(w.rows() == rows() && w.cols() == cols(), "regression: shape mismatch");
  Matrix g = 2.0 * scale_ * (gram_ * w - cross_);
  if (ridge_ > 0.0) g += 2.0 * ridge_ * w;
  return g;
}

GapReport MultivariateRegressionModel::dense_duality_gap(const Matrix& w, double lambda) const {
  const Matrix grad_psi = 2.0 * scale_ * (x_ * w - y_);
  Matrix a_grad = x_.transpose() * grad_psi;
  if (ridge_ > 0.0) a_grad += 2.0 * ridge_ * w;
  const double sigma = operator_norm_dense(a_grad);
  const double c = sigma > lambda ? lambda / sigma : 1.0;
  double psi = 0.25 * c * c / scale_ * grad_psi.squaredNorm() +
               c * grad_psi.cwiseProduct(y_).sum();
  if (ridge_ > 0.0) psi += c * c * ridge_ * w.squaredNorm();
  GapReport rep;
  rep.sigma_psi = sigma;
  rep.psi_star = psi;
  rep.gap = dense_loss(w) + lambda * nuclear_norm_dense(w) + psi;
  return rep;
}

double regression_rmse(const Matrix& x, const Matrix& y, const geometry::FixedRankPoint& w) {
  require_dims(x.cols() == w.rows() && y.cols() == w.cols() && x.rows() == y.rows(),
               "regression_rmse: shape mismatch");
  const Matrix pred = (x * w.u()) * w.b().matrix() * w.v().transpose();
  return std::sqrt((pred - y).squaredNorm() / static_cast<double>(y.rows() * y.cols()));
}

double relative_reconstruction_error(const Matrix& l, const Matrix& r,
                                     const geometry::FixedRankPoint& x) {
  require_dims(l.rows() == x.rows() && r.rows() == x.cols() && l.cols() == r.cols(),
               "relative_reconstruction_error: shape mismatch");
  const double truth_sq = ((l.transpose() * l) * (r.transpose() * r)).trace();
  const Matrix inner = (l.transpose() * x.u()) * x.b().matrix() * (x.v().transpose() * r);
  const double diff_sq =
      std::max(0.0, truth_sq - 2.0 * inner.trace() + x.b().matrix().squaredNorm());
  return std::sqrt(diff_sq) / std::sqrt(std::max(truth_sq, 1e-300));
}

}  // namespace tracenorm::problems
