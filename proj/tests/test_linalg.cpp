#include <doctest.h>

#include <Eigen/SVD>

#include "support.hpp"
#include "tracenorm/linalg.hpp"

using namespace tracenorm;
using namespace tracenorm::linalg;

TEST_CASE("sym and skew") {
  CHECK((sym(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);

  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  Matrix s = sym(a);
  CHECK(s(0, 1) == 0.5);
  CHECK(s(1, 0) == 0.5);
  Matrix k = skew(a);
  CHECK(k(0, 1) == 0.5);
  CHECK(k(1, 0) == -0.5);

  auto eng = rng::engine(1);
  Matrix r = rng::gaussian(4, 4, eng);
  CHECK((sym(r) + skew(r) - r).norm() <= 1e-15 * r.norm());
  CHECK((skew(skew(r)) - skew(r)).norm() <= 1e-15 * r.norm());
  CHECK((skew(sym(r))).norm() <= 1e-15 * r.norm());

  CHECK_THROWS_AS(sym(Matrix::Zero(2, 3)), DimensionError);
  CHECK_THROWS_AS(skew(Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("polar factor") {
  auto eng = rng::engine(2);
  Matrix q0 = rng::orthonormal(5, 3, eng);
  CHECK((polar_orthonormal_factor(q0) - q0).norm() <= 1e-12);

  // Column scaling is removed.
  Matrix a = Matrix::Zero(4, 3);
  a.topRows(3) = 2.0 * Matrix::Identity(3, 3);
  Matrix q = polar_orthonormal_factor(a);
  Matrix expect = Matrix::Zero(4, 3);
  expect.topRows(3) = Matrix::Identity(3, 3);
  CHECK((q - expect).norm() <= 1e-12);

  // Against the SVD construction U V^T.
  Matrix r = rng::gaussian(6, 2, eng);
  Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix q_svd = svd.matrixU() * svd.matrixV().transpose();
  CHECK((polar_orthonormal_factor(r) - q_svd).norm() <= 1e-10);

  // Nearest orthonormal matrix in Frobenius norm.
  for (int trial = 0; trial < 5; ++trial) {
    Matrix b = rng::gaussian(7, 3, eng);
    Matrix qb = polar_orthonormal_factor(b);
    const double base = (b - qb).norm();
    for (int probe = 0; probe < 10; ++probe) {
      Matrix pert = rng::gaussian(3, 3, eng);
      Matrix other = polar_orthonormal_factor(qb + 0.1 * rng::gaussian(7, 3, eng));
      CHECK(base <= (b - other).norm() + 1e-10);
      (void)pert;
    }
  }

  Matrix rank_def(4, 2);
  rank_def.col(0) = Vector::Ones(4);
  rank_def.col(1) = 2.0 * Vector::Ones(4);
  CHECK_THROWS_AS(polar_orthonormal_factor(rank_def), SingularityError);
}

TEST_CASE("spd function application") {
  CHECK((sym_apply_function(Matrix::Zero(3, 3), [](double t) { return std::exp(t); }) -
         Matrix::Identity(3, 3))
            .norm() <= 1e-15);

  Matrix d(2, 2);
  d << 4, 0, 0, 9;
  Matrix sq = spd_apply_function(SpdMatrix(d), [](double t) { return std::sqrt(t); });
  CHECK(sq(0, 0) == doctest::Approx(2.0));
  CHECK(sq(1, 1) == doctest::Approx(3.0));

  auto eng = rng::engine(3);
  Matrix g = rng::gaussian(4, 4, eng);
  Matrix c = 0.4 * sym(g) / sym(g).cwiseAbs().maxCoeff();  // spectrum within (-1, 1)
  Matrix e = sym_apply_function(c, [](double t) { return std::exp(t); });
  Matrix back = spd_apply_function(SpdMatrix(e), [](double t) { return std::log(t); });
  CHECK((back - c).norm() <= 1e-10 * std::max(1.0, c.norm()));
}

TEST_CASE("spd construction rejects bad input") {
  Matrix asym(2, 2);
  asym << 1, 1, 0, 1;
  CHECK_THROWS_AS(SpdMatrix{asym}, PreconditionError);
  Matrix indef(2, 2);
  indef << 1, 0, 0, -1;
  CHECK_THROWS_AS(SpdMatrix{indef}, PreconditionError);
}

TEST_CASE("skew lyapunov solve") {
  SpdMatrix b = SpdMatrix::identity(3);
  Matrix zero = Matrix::Zero(3, 3);
  CHECK(solve_skew_lyapunov(b, zero).norm() == 0.0);

  // B = I makes the equation 2 Omega = C.
  auto eng = rng::engine(4);
  Matrix c = skew(rng::gaussian(3, 3, eng));
  CHECK((solve_skew_lyapunov(b, c) - 0.5 * c).norm() <= 1e-14 * c.norm());

  // Hand-solved 2x2 case: eigenvalues of B^2 are 1 and 4.
  Matrix d(2, 2);
  d << 1, 0, 0, 2;
  Matrix c2(2, 2);
  c2 << 0, 3.0, -3.0, 0;
  Matrix omega = solve_skew_lyapunov(SpdMatrix(d), c2);
  CHECK(omega(0, 1) == doctest::Approx(3.0 / 5.0).epsilon(1e-12));

  // Residual and skewness on random SPD B.
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    auto e2 = rng::engine(rng::mix(seed));
    Matrix g = rng::gaussian(5, 5, e2);
    SpdMatrix bb(g * g.transpose() + Matrix::Identity(5, 5));
    Matrix cc = skew(rng::gaussian(5, 5, e2));
    Matrix om = solve_skew_lyapunov(bb, cc);
    const Matrix b2 = bb.matrix() * bb.matrix();
    CHECK((om * b2 + b2 * om - cc).norm() <= 1e-12 * cc.norm());
    CHECK((om + om.transpose()).norm() <= 1e-12 * std::max(1.0, om.norm()));
  }

  Matrix not_skew = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(solve_skew_lyapunov(b, not_skew), PreconditionError);
}

TEST_CASE("dominant singular triplet") {
  Matrix d(2, 2);
  d << 3, 0, 0, 1;
  auto t = dominant_singular_triplet(dense_operator(d));
  CHECK(t.sigma == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(std::abs(t.u(0)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(t.v(0)) == doctest::Approx(1.0).epsilon(1e-8));

  // Rank-one closed form.
  auto eng = rng::engine(8);
  Vector a = rng::gaussian(6, 1, eng).col(0);
  Vector b = rng::gaussian(4, 1, eng).col(0);
  Matrix ab = a * b.transpose();
  auto t1 = dominant_singular_triplet(dense_operator(ab));
  CHECK(t1.sigma == doctest::Approx(a.norm() * b.norm()).epsilon(1e-10));
  CHECK(std::abs(t1.u.dot(a / a.norm())) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(t1.v.dot(b / b.norm())) == doctest::Approx(1.0).epsilon(1e-8));

  // Against a full SVD.
  Matrix r = rng::gaussian(5, 4, eng);
  Eigen::JacobiSVD<Matrix> svd(r);
  auto t2 = dominant_singular_triplet(dense_operator(r), 1e-12);
  CHECK(t2.sigma == doctest::Approx(svd.singularValues()(0)).epsilon(1e-8));

  // Residual contract.
  CHECK((r * t2.v - t2.sigma * t2.u).norm() <= 1e-10 * t2.sigma);
  CHECK((r.transpose() * t2.u - t2.sigma * t2.v).norm() <= 1e-10 * t2.sigma);

  // Zero operator resolves to sigma = 0.
  auto tz = dominant_singular_triplet(dense_operator(Matrix::Zero(3, 2)));
  CHECK(tz.sigma == 0.0);

  // Clustered spectrum with a tiny budget raises with the best iterate.
  Matrix slow = Matrix::Identity(4, 4);
  slow(0, 0) = 1.0 + 1e-9;
  CHECK_THROWS_AS(dominant_singular_triplet(dense_operator(slow), 1e-14, 3), ConvergenceError);
  try {
    dominant_singular_triplet(dense_operator(slow), 1e-14, 3);
  } catch (const ConvergenceError& e) {
    CHECK(e.best.sigma == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("operator adjoint consistency") {
  auto eng = rng::engine(9);
  Matrix a = rng::gaussian(6, 4, eng);
  auto op = dense_operator(a);
  for (int probe = 0; probe < 20; ++probe) {
    Vector u = rng::gaussian(6, 1, eng).col(0);
    Vector v = rng::gaussian(4, 1, eng).col(0);
    const double lhs = op.apply(v).dot(u);
    const double rhs = op.apply_transpose(u).dot(v);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * u.norm() * v.norm() * a.norm());
  }
}

TEST_CASE("small svd") {
  auto id = small_svd(Matrix::Identity(3, 3));
  CHECK((id.p * id.sigma.asDiagonal() * id.q.transpose() - Matrix::Identity(3, 3)).norm() <=
        1e-14);
  CHECK(id.sigma.minCoeff() == doctest::Approx(1.0));

  Matrix d(2, 2);
  d << 2, 0, 0, 1;
  auto sd = small_svd(d);
  CHECK(sd.sigma(0) == doctest::Approx(2.0));
  CHECK(sd.sigma(1) == doctest::Approx(1.0));

  auto eng = rng::engine(10);
  Matrix k = rng::gaussian(4, 4, eng);
  auto s = small_svd(k);
  CHECK((s.p * s.sigma.asDiagonal() * s.q.transpose() - k).norm() <= 1e-12 * k.norm());
  CHECK((s.p.transpose() * s.p - Matrix::Identity(4, 4)).norm() <= 1e-12);
  CHECK((s.q.transpose() * s.q - Matrix::Identity(4, 4)).norm() <= 1e-12);
  // Nonincreasing and sign-pinned.
  for (Index i = 1; i < 4; ++i) CHECK(s.sigma(i) <= s.sigma(i - 1) + 1e-15);
  auto s2 = small_svd(k);
  CHECK((s.p - s2.p).norm() == 0.0);
}
