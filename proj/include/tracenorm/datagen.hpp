#pragma once

#include <cstdint>
#include <vector>

#include "tracenorm/problems.hpp"
#include "tracenorm/types.hpp"

// Synthetic instance generation for the two shipped problems. Everything is
// driven by one 64-bit seed through the named-stream splitter so instances
// are exactly reproducible.

namespace tracenorm::datagen {

struct CompletionInstance {
  Matrix left;   // n x r ground-truth factor
  Matrix right;  // m x r ground-truth factor
  problems::ObservedEntries observed;
};

// Rank-r ground truth L R^T with standard Gaussian factors; `nnz` entries
// sampled uniformly without replacement. Throws ParameterError when nnz
// exceeds the matrix size.
CompletionInstance make_completion_instance(Index n, Index m, Index r, Index nnz,
                                            std::uint64_t seed);

// Number of observed entries for an oversampling ratio: round(os (n+m-r) r).
Index entries_for_oversampling(Index n, Index m, Index r, double os);

struct RegressionInstance {
  Matrix x_train, y_train;  // training responses carry the noise
  Matrix x_test, y_test;    // test responses are clean
  Matrix w_star;            // q x k rank-r coefficients
  std::vector<Index> train_idx, test_idx;
  double noise_sigma = 0.0;
};

// Gaussian inputs X (n x q), rank-r coefficients W* from Gaussian factors,
// responses Y = X W*, and a random train/test row split. When snr > 0 the
// per-entry noise level is derived from it as
//   sigma = ||Y_train||_F / (snr * sqrt(n_train * k)),
// i.e. snr is the ratio of signal to noise Frobenius norms; otherwise
// noise_sigma is used directly.
RegressionInstance make_regression_instance(Index n, Index q, Index k, Index r,
                                            double split_fraction, double snr,
                                            double noise_sigma, std::uint64_t seed);

}  // namespace tracenorm::datagen
