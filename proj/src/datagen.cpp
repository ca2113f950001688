#include "tracenorm/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "tracenorm/rng.hpp"

namespace tracenorm::datagen {

Index entries_for_oversampling(Index n, Index m, Index r, double os) {
  return static_cast<Index>(std::llround(os * static_cast<double>((n + m - r) * r)));
}

CompletionInstance make_completion_instance(Index n, Index m, Index r, Index nnz,
                                            std::uint64_t seed) {
  require(n > 0 && m > 0 && r > 0 && r <= std::min(n, m), "completion instance: bad shape");
  if (nnz < 0 || nnz > n * m)
    throw ParameterError("completion instance: entry count exceeds matrix size");

  auto eng = rng::engine(rng::stream_seed(seed, "data"));
  Matrix left = rng::gaussian(n, r, eng);
  Matrix right = rng::gaussian(m, r, eng);

  // Uniform sample of cells without replacement; dense shuffle when a large
  // fraction is requested, rejection sampling when the mask is sparse.
  std::vector<std::int64_t> cells;
  const std::int64_t total = static_cast<std::int64_t>(n) * m;
  if (nnz * 4 >= total) {
    cells.resize(total);
    std::iota(cells.begin(), cells.end(), std::int64_t{0});
    std::shuffle(cells.begin(), cells.end(), eng);
    cells.resize(nnz);
  } else {
    std::unordered_set<std::int64_t> picked;
    picked.reserve(static_cast<size_t>(nnz) * 2);
    std::uniform_int_distribution<std::int64_t> dist(0, total - 1);
    while (static_cast<Index>(picked.size()) < nnz) picked.insert(dist(eng));
    cells.assign(picked.begin(), picked.end());
    std::sort(cells.begin(), cells.end());
  }

  std::vector<problems::ObservedEntries::Triplet> triplets;
  triplets.reserve(static_cast<size_t>(nnz));
  for (std::int64_t c : cells) {
    const Index i = static_cast<Index>(c / m);
    const Index j = static_cast<Index>(c % m);
    triplets.push_back({i, j, left.row(i).dot(right.row(j))});
  }
  return CompletionInstance{std::move(left), std::move(right),
                            problems::ObservedEntries(n, m, std::move(triplets))};
}

RegressionInstance make_regression_instance(Index n, Index q, Index k, Index r,
                                            double split_fraction, double snr,
                                            double noise_sigma, std::uint64_t seed) {
  require(n > 1 && q > 0 && k > 0 && r > 0 && r <= std::min(q, k),
          "regression instance: bad shape");
  require(split_fraction > 0.0 && split_fraction < 1.0,
          "regression instance: split fraction must be in (0, 1)");

  auto eng = rng::engine(rng::stream_seed(seed, "data"));
  Matrix x = rng::gaussian(n, q, eng);
  Matrix wl = rng::gaussian(q, r, eng);
  Matrix wr = rng::gaussian(k, r, eng);
  Matrix w_star = wl * wr.transpose();
  Matrix y = x * w_star;

  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), eng);
  const Index n_train = std::max<Index>(1, static_cast<Index>(std::llround(split_fraction * n)));

  RegressionInstance inst;
  inst.w_star = std::move(w_star);
  inst.train_idx.assign(perm.begin(), perm.begin() + n_train);
  inst.test_idx.assign(perm.begin() + n_train, perm.end());
  std::sort(inst.train_idx.begin(), inst.train_idx.end());
  std::sort(inst.test_idx.begin(), inst.test_idx.end());

  inst.x_train.resize(n_train, q);
  inst.y_train.resize(n_train, k);
  for (Index i = 0; i < n_train; ++i) {
    inst.x_train.row(i) = x.row(inst.train_idx[i]);
    inst.y_train.row(i) = y.row(inst.train_idx[i]);
  }
  const Index n_test = n - n_train;
  inst.x_test.resize(n_test, q);
  inst.y_test.resize(n_test, k);
  for (Index i = 0; i < n_test; ++i) {
    inst.x_test.row(i) = x.row(inst.test_idx[i]);
    inst.y_test.row(i) = y.row(inst.test_idx[i]);
  }

  double sigma = noise_sigma;
  if (snr > 0.0)
    sigma = inst.y_train.norm() / (snr * std::sqrt(static_cast<double>(n_train * k)));
  inst.noise_sigma = sigma;
  if (sigma > 0.0) inst.y_train += sigma * rng::gaussian(n_train, k, eng);
  return inst;
}

}  // namespace tracenorm::datagen
