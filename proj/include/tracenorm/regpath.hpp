#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tracenorm/solver.hpp"
#include "tracenorm/types.hpp"

// Predictor-corrector computation of the full regularization path over a
// geometrically decreasing grid of penalty values. When two consecutive
// solutions share a rank, the next solve is started from a first-order
// extrapolation along the solution curve; otherwise (and for the first two
// grid points) from a plain warm restart.

namespace tracenorm::regpath {

enum class StartMode { warm, predicted };

struct PathConfig {
  double lambda_max = 0.0;  // 0 selects a data-dependent default, see compute_path
  double lambda_min = 1e-3;
  double gamma = 0.95;  // lambda_{i+1} = gamma * lambda_i
  solver::SolverConfig solver_cfg;
  bool predictor_enabled = true;
  double step_shrink = 0.5;  // backtracking factor for the predictor step size

  void validate() const;
};

struct PathRecord {
  double lambda = 0.0;
  solver::ConvexSolution solution;
  int rank = 0;
  double rel_gap = 0.0;
  double sigma_gap = 0.0;
  int iterations = 0;  // trust-region iterations spent on this grid point
  StartMode mode = StartMode::warm;
  // Objective excess of the starting guess over the solved optimum at this
  // grid point, for the predicted start and for the plain warm start.
  double inaccuracy_predicted = 0.0;
  double inaccuracy_warm = 0.0;
  bool failed = false;
  std::string failure;
};

struct PathResult {
  std::vector<PathRecord> records;
  int warm_restarts = 0;
  int predictor_steps = 0;
};

// phi(x_hat) - phi(x_star) at the given penalty; nonnegative when x_star is
// the optimum. Lower means a better prediction.
double prediction_inaccuracy(const geometry::FixedRankPoint& x_hat,
                             const geometry::FixedRankPoint& x_star,
                             const problems::ProblemModel& model, double lambda);

// First-order prediction of the solution at lambda_next from the two previous
// solutions of equal rank. The initial step (lambda_next - lambda_curr) /
// (lambda_curr - lambda_prev) is backtracked until the predicted point does
// not score worse than the warm-restart candidate at lambda_next; if the step
// collapses the warm restart itself is returned.
geometry::FixedRankPoint predict_next(const geometry::FixedRankPoint& x_prev,
                                      const geometry::FixedRankPoint& x_curr, double lambda_prev,
                                      double lambda_curr, double lambda_next,
                                      const problems::ProblemModel& model,
                                      const PathConfig& cfg);

PathResult compute_path(const problems::ProblemModel& model, const PathConfig& cfg);

}  // namespace tracenorm::regpath
