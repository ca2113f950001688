#pragma once

#include "tracenorm/problems.hpp"
#include "tracenorm/types.hpp"

// Dense proximal-gradient reference solver for desk-scale instances. It is
// deliberately independent of the factored solver: plain ISTA iterations with
// an exact singular value soft-threshold, used to validate solutions and to
// generate expected values in tests. Never called by the main algorithms.

namespace tracenorm::oracle {

struct OracleConfig {
  double step = 0.0;  // 0 selects 1 / lipschitz_estimate()
  Index max_iter = 200000;
  double tol = 1e-12;      // relative objective stagnation
  double gap_tol = 1e-9;   // early exit once the relative duality gap certifies
  Index gap_check_every = 250;
};

struct OracleResult {
  Matrix x;
  double objective = 0.0;
  double nuclear_norm = 0.0;
  Index iterations = 0;
  bool converged = false;
  double rel_gap = 0.0;  // relative duality gap at the returned point
};

// Proximal operator of tau * ||.||_*: soft-thresholds the singular values.
Matrix singular_value_soft_threshold(const Matrix& x, double tau);

OracleResult solve_convex_dense(const problems::ProblemModel& model, double lambda,
                                const OracleConfig& cfg = {});

// Numerical rank: count of singular values above threshold * sigma_max.
Index numerical_rank(const Matrix& x, double threshold = 1e-8);

}  // namespace tracenorm::oracle
