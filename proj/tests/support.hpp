#pragma once

#include <doctest.h>

#include <cmath>

#include "tracenorm/datagen.hpp"
#include "tracenorm/geometry.hpp"
#include "tracenorm/problems.hpp"
#include "tracenorm/rng.hpp"
#include "tracenorm/solver.hpp"

// Shared helpers for the unit and acceptance suites: random instances,
// finite-difference probes, and small independent reference computations.

namespace testsupport {

using namespace tracenorm;

inline geometry::FixedRankPoint random_point(Index n, Index m, Index p, std::uint64_t seed,
                                             double b_spread = 1.0) {
  auto eng = rng::engine(rng::mix(seed));
  Matrix u = rng::orthonormal(n, p, eng);
  Matrix v = rng::orthonormal(m, p, eng);
  Matrix g = rng::gaussian(p, p, eng);
  Matrix b = b_spread * (g * g.transpose()) + Matrix::Identity(p, p);
  return geometry::FixedRankPoint(std::move(u), linalg::SpdMatrix(std::move(b)), std::move(v));
}

inline geometry::TangentVector random_tangent(const geometry::FixedRankPoint& x,
                                              std::uint64_t seed) {
  auto eng = rng::engine(rng::mix(seed ^ 0x7a9fULL));
  geometry::AmbientTriple z{rng::gaussian(x.rows(), x.rank(), eng),
                            rng::gaussian(x.rank(), x.rank(), eng),
                            rng::gaussian(x.cols(), x.rank(), eng)};
  return geometry::project_to_tangent(x, z);
}

inline geometry::TangentVector random_horizontal(const geometry::FixedRankPoint& x,
                                                 std::uint64_t seed) {
  return geometry::project_to_horizontal(x, random_tangent(x, seed));
}

// A vertical direction (U Omega, B Omega - Omega B, V Omega).
inline geometry::TangentVector vertical_direction(const geometry::FixedRankPoint& x,
                                                  const Matrix& omega) {
  geometry::TangentVector t;
  t.z_u = x.u() * omega;
  t.z_b = x.b().matrix() * omega - omega * x.b().matrix();
  t.z_v = x.v() * omega;
  t.horizontal = false;
  return t;
}

// Skew basis element with a 1/-1 pair at (i, j).
inline Matrix skew_basis(Index p, Index i, Index j) {
  Matrix e = Matrix::Zero(p, p);
  e(i, j) = 1.0;
  e(j, i) = -1.0;
  return e;
}

inline problems::MatrixCompletionModel random_completion_model(Index n, Index m, Index r,
                                                               double fraction,
                                                               std::uint64_t seed,
                                                               double ridge = 0.0) {
  const Index nnz = static_cast<Index>(std::llround(fraction * static_cast<double>(n * m)));
  auto inst = datagen::make_completion_instance(n, m, r, nnz, seed);
  return problems::MatrixCompletionModel(std::move(inst.observed), ridge);
}

// Dense evaluation of the completion objective, used as an oracle against the
// sparse-kernel path.
inline double dense_completion_objective(const problems::MatrixCompletionModel& model,
                                         const geometry::FixedRankPoint& x, double lambda) {
  return model.dense_loss(x.to_dense()) + lambda * x.trace_b();
}

// Central finite difference of t -> f(retract(x, t xi)) at t = 0.
template <typename F>
double directional_derivative_fd(const geometry::FixedRankPoint& x,
                                 const geometry::TangentVector& xi, F&& f, double h) {
  const double fp = f(geometry::retract(x, h * xi));
  const double fm = f(geometry::retract(x, -h * xi));
  return (fp - fm) / (2.0 * h);
}

template <typename F>
double second_derivative_fd(const geometry::FixedRankPoint& x, const geometry::TangentVector& xi,
                            F&& f, double h) {
  const double fp = f(geometry::retract(x, h * xi));
  const double f0 = f(x);
  const double fm = f(geometry::retract(x, -h * xi));
  return (fp - 2.0 * f0 + fm) / (h * h);
}

}  // namespace testsupport
