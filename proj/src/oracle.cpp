#include "tracenorm/oracle.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace tracenorm::oracle {

namespace {

struct ThresholdedSvd {
  Matrix x;
  double nuclear = 0.0;
};

ThresholdedSvd svt(const Matrix& x, double tau) {
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector s = svd.singularValues();
  for (Index i = 0; i < s.size(); ++i) s(i) = std::max(s(i) - tau, 0.0);
  ThresholdedSvd out;
  out.x = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  out.nuclear = s.sum();
  return out;
}

}  // namespace

Matrix singular_value_soft_threshold(const Matrix& x, double tau) {
  require(tau >= 0.0, "singular_value_soft_threshold: tau must be nonnegative");
  if (tau == 0.0) return x;
  return svt(x, tau).x;
}

OracleResult solve_convex_dense(const problems::ProblemModel& model, double lambda,
                                const OracleConfig& cfg) {
  require(lambda >= 0.0, "oracle: lambda must be nonnegative");
  const double step = cfg.step > 0.0 ? cfg.step : 1.0 / model.lipschitz_estimate();
  require(step > 0.0, "oracle: step must be positive");

  OracleResult res;
  res.x = Matrix::Zero(model.rows(), model.cols());
  res.nuclear_norm = 0.0;
  double obj = model.dense_loss(res.x);

  for (Index it = 1; it <= cfg.max_iter; ++it) {
    ThresholdedSvd next = svt(res.x - step * model.dense_gradient(res.x), step * lambda);
    const double obj_next = model.dense_loss(next.x) + lambda * next.nuclear;
    res.x = std::move(next.x);
    res.nuclear_norm = next.nuclear;
    res.iterations = it;
    const double drop = std::abs(obj - obj_next);
    obj = obj_next;
    if (drop <= cfg.tol * std::max(std::abs(obj), 1e-30)) {
      res.converged = true;
      break;
    }
    if (cfg.gap_check_every > 0 && it % cfg.gap_check_every == 0) {
      if (model.dense_duality_gap(res.x, lambda).relative() <= cfg.gap_tol) {
        res.converged = true;
        break;
      }
    }
  }
  res.objective = obj;
  res.rel_gap = model.dense_duality_gap(res.x, lambda).relative();
  return res;
}

Index numerical_rank(const Matrix& x, double threshold) {
  if (x.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(x);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold * s(0)) ++r;
  return r;
}

}  // namespace tracenorm::oracle
