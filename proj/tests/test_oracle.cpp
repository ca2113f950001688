#include <doctest.h>

#include <Eigen/SVD>

#include "support.hpp"
#include "tracenorm/oracle.hpp"

using namespace tracenorm;
using namespace tracenorm::oracle;

TEST_CASE("singular value soft threshold") {
  auto eng = rng::engine(400);
  Matrix x = rng::gaussian(5, 4, eng);
  CHECK((singular_value_soft_threshold(x, 0.0) - x).norm() == 0.0);

  Eigen::JacobiSVD<Matrix> svd(x);
  const double smax = svd.singularValues()(0);
  CHECK(singular_value_soft_threshold(x, smax * 1.01).norm() <= 1e-12 * x.norm());

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  Matrix t = singular_value_soft_threshold(d, 2.0);
  CHECK(t(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(t(1, 1)) <= 1e-14);
}

TEST_CASE("soft threshold is the proximal map of the trace norm") {
  // On 2x2 diagonal inputs, scan scaled singular values and verify no
  // candidate beats the thresholded point for 0.5 ||Z - X||^2 + tau ||Z||_*.
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = 2.0;
  x(1, 1) = 0.7;
  const double tau = 0.5;
  Matrix best = singular_value_soft_threshold(x, tau);
  auto value = [&](const Matrix& z) {
    Eigen::JacobiSVD<Matrix> svd(z);
    return 0.5 * (z - x).squaredNorm() + tau * svd.singularValues().sum();
  };
  const double opt = value(best);
  for (double a = 0.0; a <= 2.5; a += 0.05)
    for (double b = 0.0; b <= 2.5; b += 0.05) {
      Matrix z = Matrix::Zero(2, 2);
      z(0, 0) = a;
      z(1, 1) = b;
      CHECK(opt <= value(z) + 1e-10);
    }
}

TEST_CASE("oracle converges to zero for huge lambda") {
  auto model = testsupport::random_completion_model(8, 6, 2, 0.8, 410);
  OracleResult res = solve_convex_dense(model, 1e6);
  CHECK(res.converged);
  CHECK(res.x.norm() <= 1e-12);
}

TEST_CASE("oracle recovers a fully observed low-rank matrix as lambda -> 0") {
  const Index n = 10, m = 8, r = 2;
  auto inst = datagen::make_completion_instance(n, m, r, n * m, 411);
  Matrix truth = inst.left * inst.right.transpose();
  problems::MatrixCompletionModel model(std::move(inst.observed));
  OracleResult res = solve_convex_dense(model, 1e-7);
  CHECK(res.converged);
  CHECK((res.x - truth).norm() <= 1e-6 * truth.norm());
  // At this extreme penalty the relative gap bottoms out near
  // eps * ||X|| / lambda; moderate penalties resolve far below this.
  CHECK(res.rel_gap <= 1e-6);
}

TEST_CASE("oracle certifies at moderate penalties") {
  auto model = testsupport::random_completion_model(10, 8, 2, 0.8, 414);
  for (double lambda : {1e-2, 1e-1, 1.0}) {
    OracleResult res = solve_convex_dense(model, lambda);
    CHECK(res.converged);
    CHECK(res.rel_gap <= 1e-8);
  }
}

TEST_CASE("oracle objective is monotone") {
  auto model = testsupport::random_completion_model(9, 7, 2, 0.6, 412);
  double prev = std::numeric_limits<double>::infinity();
  Matrix x = Matrix::Zero(9, 7);
  const double lambda = 0.3;
  const double step = 1.0 / model.lipschitz_estimate();
  for (int it = 0; it < 50; ++it) {
    x = singular_value_soft_threshold(x - step * model.dense_gradient(x), step * lambda);
    Eigen::JacobiSVD<Matrix> svd(x);
    const double obj = model.dense_loss(x) + lambda * svd.singularValues().sum();
    CHECK(obj <= prev + 1e-12);
    prev = obj;
  }
}

TEST_CASE("numerical rank") {
  auto eng = rng::engine(413);
  Matrix a = rng::gaussian(6, 2, eng) * rng::gaussian(5, 2, eng).transpose();
  CHECK(numerical_rank(a) == 2);
  CHECK(numerical_rank(Matrix::Zero(4, 4)) == 0);
}
