#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tracenorm/geometry.hpp"
#include "tracenorm/linalg.hpp"
#include "tracenorm/problems.hpp"
#include "tracenorm/trustregion.hpp"
#include "tracenorm/types.hpp"

// Descent-restart solver for min f(X) + lambda ||X||_*: alternates fixed-rank
// trust-region solves with rank-one descent updates until either the
// dominant-singular-value certificate sigma_1 - lambda <= eps or the relative
// duality gap certifies (near) global optimality.

namespace tracenorm::solver {

enum class Certificate { none, sigma, gap };

struct SolverConfig {
  int initial_rank = 1;
  double epsilon_sigma = 1e-5;  // threshold on sigma_1 - lambda (absolute)
  double epsilon_gap = 1e-5;    // threshold on the relative duality gap
  double epsilon_gap_abs = 0.0; // optional absolute-gap certificate; 0 disables
  int max_rank = 0;             // 0 selects min(rows, cols)
  trustregion::TrustRegionConfig tr;
  int max_tr_iters_per_rank = 0;  // 0 waits for local convergence at each rank
  double backtrack_shrink = 0.5;
  double armijo_c = 1e-4;
  double initial_b_scale = 1e-3;
  std::uint64_t init_seed = 0;   // seed of the random initializer stream
  double triplet_tol = 1e-9;
  Index triplet_max_iter_factor = 50;  // max_iter = factor * max(n, m)

  void validate(Index rows, Index cols) const;
};

// One fixed-rank stage of the outer loop.
struct RankStageRecord {
  int rank = 0;
  double cost = 0.0;
  double grad_norm = 0.0;
  double sigma_gap = 0.0;  // sigma_1 - lambda after the stage
  double rel_gap = 0.0;
  int outer_iters = 0;
  int inner_iters = 0;
  std::vector<trustregion::IterationEvent> iterations;
};

// A rank-one descent update between stages, with the quantities entering the
// guaranteed-decrease bound.
struct RankIncrementRecord {
  int from_rank = 0;
  double lambda = 0.0;
  double sigma1 = 0.0;
  double lipschitz = 0.0;
  double beta = 0.0;
  int backtracks = 0;
  double objective_before = 0.0;
  double objective_after = 0.0;
};

struct ConvexSolution {
  geometry::FixedRankPoint point;
  double lambda = 0.0;
  int rank = 0;
  double sigma_gap = 0.0;
  double duality_gap = 0.0;
  double rel_duality_gap = 0.0;
  Certificate certificate = Certificate::none;
  bool certified() const { return certificate != Certificate::none; }
  std::vector<RankStageRecord> stages;
  std::vector<RankIncrementRecord> increments;
  int total_outer_iters = 0;
  int total_inner_iters = 0;
  double wall_seconds = 0.0;
};

struct CertificateReport {
  double sigma1 = 0.0;
  double sigma_gap = 0.0;
  double gap = 0.0;
  double rel_gap = 0.0;
  bool certified = false;
  Certificate which = Certificate::none;
  Vector u, v;  // dominant singular vectors of the dual variable
};

// Evaluates both stopping certificates at a point. The dominant triplet of
// the dual variable is computed once and shared with the duality gap.
CertificateReport check_certificate(const geometry::FixedRankPoint& x,
                                    const problems::ProblemModel& model, double lambda,
                                    const SolverConfig& cfg);

struct RankOneStep {
  double beta = 0.0;
  Vector u, v;
  double sigma1 = 0.0;
  int backtracks = 0;
};

// Backtracking rank-one descent step X+ = X - beta u v^T from the start value
// beta = (sigma_1 - lambda) / L_f, halving until the sufficient-decrease test
// objective(X+) <= objective(X) - armijo_c * beta (sigma_1 - lambda - L_f beta / 2)
// holds. Requires sigma_1 > lambda.
RankOneStep rank_one_update(const geometry::FixedRankPoint& x,
                            const problems::ProblemModel& model, double lambda,
                            double lipschitz, const SolverConfig& cfg,
                            const linalg::SingularTriplet& dominant);

// Embeds X - beta u v^T as a rank p+1 factored point through the SVD of the
// (p+1) x (p+1) core matrix; exact up to roundoff. Handles the degenerate
// case of an update direction inside the current row/column space by
// completing with a fresh orthonormal direction and zero coupling.
geometry::FixedRankPoint embed_rank_increment(const geometry::FixedRankPoint& x, double beta,
                                              const Vector& u, const Vector& v);

// Deterministic random starting point: orthonormalized Gaussian factors and a
// small multiple of the identity for B.
geometry::FixedRankPoint random_point(Index rows, Index cols, Index rank, std::uint64_t seed,
                                      double b_scale);

ConvexSolution minimize(const problems::ProblemModel& model, double lambda,
                        const SolverConfig& cfg,
                        std::optional<geometry::FixedRankPoint> x0 = std::nullopt);

}  // namespace tracenorm::solver
