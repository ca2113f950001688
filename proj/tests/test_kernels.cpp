#include <doctest.h>

#include "support.hpp"
#include "tracenorm/kernels.hpp"
#include "tracenorm/problems.hpp"

using namespace tracenorm;

namespace {

problems::ObservedEntries random_entries(Index n, Index m, double fraction, std::uint64_t seed) {
  auto eng = rng::engine(rng::mix(seed));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal;
  std::vector<problems::ObservedEntries::Triplet> t;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j)
      if (unif(eng) < fraction) t.push_back({i, j, normal(eng)});
  return problems::ObservedEntries(n, m, std::move(t));
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    auto entries = random_entries(37, 23, 0.4, seed);
    auto eng = rng::engine(rng::mix(seed + 100));
    const Index p = 4;
    RowMatrix l = rng::gaussian(37, p, eng);
    RowMatrix r = rng::gaussian(23, p, eng);
    const auto layout = entries.layout();

    std::vector<double> a(layout.nnz), b(layout.nnz);
    kernels::gather_product(layout, l, r, a.data());
    kernels::gather_product_serial(layout, l, r, b.data());
    for (Index k = 0; k < layout.nnz; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-14));

    kernels::gather_residual(layout, l, r, entries.values().data(), 2.0, a.data());
    kernels::gather_residual_serial(layout, l, r, entries.values().data(), 2.0, b.data());
    for (Index k = 0; k < layout.nnz; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-14));

    RowMatrix d = rng::gaussian(23, p, eng);
    RowMatrix o1, o2;
    kernels::sparse_dense(layout, a.data(), d, o1);
    kernels::sparse_dense_serial(layout, a.data(), d, o2);
    CHECK((o1 - o2).norm() <= 1e-13 * std::max(1.0, o2.norm()));

    RowMatrix dt = rng::gaussian(37, p, eng);
    kernels::sparse_dense_transpose(layout, a.data(), dt, o1);
    kernels::sparse_dense_transpose_serial(layout, a.data(), dt, o2);
    CHECK((o1 - o2).norm() <= 1e-13 * std::max(1.0, o2.norm()));

    CHECK(kernels::dot(a.data(), b.data(), layout.nnz) ==
          doctest::Approx(kernels::dot_serial(a.data(), b.data(), layout.nnz)).epsilon(1e-12));
    CHECK(kernels::sum_squares(a.data(), layout.nnz) ==
          doctest::Approx(kernels::sum_squares_serial(a.data(), layout.nnz)).epsilon(1e-12));
  }
}

TEST_CASE("sparse products agree with dense arithmetic") {
  auto entries = random_entries(15, 11, 0.5, 42);
  const auto layout = entries.layout();
  Matrix dense = Matrix::Zero(15, 11);
  for (Index k = 0; k < layout.nnz; ++k)
    dense(layout.row[k], layout.col[k]) = entries.values()[k];

  auto eng = rng::engine(rng::mix(43));
  RowMatrix d = rng::gaussian(11, 3, eng);
  RowMatrix out;
  kernels::sparse_dense(layout, entries.values().data(), d, out);
  CHECK((Matrix(out) - dense * Matrix(d)).norm() <= 1e-12);

  RowMatrix dt = rng::gaussian(15, 3, eng);
  kernels::sparse_dense_transpose(layout, entries.values().data(), dt, out);
  CHECK((Matrix(out) - dense.transpose() * Matrix(dt)).norm() <= 1e-12);
}

TEST_CASE("kernels handle an empty mask") {
  problems::ObservedEntries entries(5, 4, {});
  const auto layout = entries.layout();
  RowMatrix l(5, 2), r(4, 2), d(4, 2), out;
  l.setRandom();
  r.setRandom();
  d.setRandom();
  kernels::gather_product(layout, l, r, nullptr);
  kernels::sparse_dense(layout, nullptr, d, out);
  CHECK(out.rows() == 5);
  CHECK(out.norm() == 0.0);
}

TEST_CASE("single observed entry") {
  problems::ObservedEntries entries(3, 3, {{1, 2, 5.0}});
  const auto layout = entries.layout();
  RowMatrix d = RowMatrix::Identity(3, 3);
  RowMatrix out;
  kernels::sparse_dense(layout, entries.values().data(), d, out);
  Matrix expect = Matrix::Zero(3, 3);
  expect(1, 2) = 5.0;
  CHECK((Matrix(out) - expect).norm() == 0.0);
}
