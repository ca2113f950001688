#include "tracenorm/regpath.hpp"

#include <cmath>
#include <limits>

namespace tracenorm::regpath {

namespace geo = tracenorm::geometry;

void PathConfig::validate() const {
  require(gamma > 0.0 && gamma < 1.0, "path: need 0 < gamma < 1");
  require(lambda_min > 0.0, "path: lambda_min must be positive");
  if (lambda_max > 0.0)
    require(lambda_min < lambda_max, "path: need lambda_min < lambda_max");
}

double prediction_inaccuracy(const geo::FixedRankPoint& x_hat, const geo::FixedRankPoint& x_star,
                             const problems::ProblemModel& model, double lambda) {
  return model.objective(x_hat, lambda) - model.objective(x_star, lambda);
}

geo::FixedRankPoint predict_next(const geo::FixedRankPoint& x_prev,
                                 const geo::FixedRankPoint& x_curr, double lambda_prev,
                                 double lambda_curr, double lambda_next,
                                 const problems::ProblemModel& model, const PathConfig& cfg) {
  require(x_prev.rank() == x_curr.rank(), "predict_next: ranks differ");
  geo::TangentVector xi = geo::inverse_retract_approx(x_curr, x_prev);
  // Optimal for a straight solution path traversed at a constant grid ratio.
  double step = (lambda_next - lambda_curr) / (lambda_curr - lambda_prev);
  const double warm_objective = model.objective(x_curr, lambda_next);
  while (step >= 1e-8) {
    try {
      geo::FixedRankPoint candidate = geo::retract(x_curr, -step * xi);
      if (model.objective(candidate, lambda_next) <= warm_objective) return candidate;
    } catch (const SingularityError&) {
      // Step left the rank-p set; shrink and retry.
    }
    step *= cfg.step_shrink;
  }
  return x_curr;  // prediction never beats the warm candidate; fall back
}

PathResult compute_path(const problems::ProblemModel& model, const PathConfig& cfg) {
  cfg.validate();
  const double lambda_max =
      cfg.lambda_max > 0.0 ? cfg.lambda_max : model.gradient_norm_at_zero();
  require(cfg.lambda_min < lambda_max, "path: lambda_min is above the grid start");

  PathResult out;
  // Indices of the last two successfully solved records; push_back may
  // reallocate, so pointers into the vector are not kept.
  std::ptrdiff_t prev1 = -1, prev2 = -1;

  for (double lambda = lambda_max; lambda >= cfg.lambda_min; lambda *= cfg.gamma) {
    PathRecord rec;
    rec.lambda = lambda;
    rec.inaccuracy_predicted = std::numeric_limits<double>::quiet_NaN();
    rec.inaccuracy_warm = std::numeric_limits<double>::quiet_NaN();

    std::optional<geo::FixedRankPoint> start;
    std::optional<geo::FixedRankPoint> warm_candidate;
    rec.mode = StartMode::warm;
    if (prev1 >= 0) {
      const PathRecord& r1 = out.records[prev1];
      warm_candidate = r1.solution.point;
      start = r1.solution.point;
      if (cfg.predictor_enabled && prev2 >= 0) {
        const PathRecord& r2 = out.records[prev2];
        if (r2.solution.point.rank() == r1.solution.point.rank()) {
          rec.mode = StartMode::predicted;
          start = predict_next(r2.solution.point, r1.solution.point, r2.lambda, r1.lambda,
                               lambda, model, cfg);
        }
      }
    }

    try {
      solver::ConvexSolution sol = solver::minimize(model, lambda, cfg.solver_cfg, start);
      rec.rank = sol.rank;
      rec.rel_gap = sol.rel_duality_gap;
      rec.sigma_gap = sol.sigma_gap;
      rec.iterations = sol.total_outer_iters;
      if (warm_candidate) {
        rec.inaccuracy_warm = prediction_inaccuracy(*warm_candidate, sol.point, model, lambda);
        rec.inaccuracy_predicted =
            rec.mode == StartMode::predicted
                ? prediction_inaccuracy(*start, sol.point, model, lambda)
                : rec.inaccuracy_warm;
      }
      rec.solution = std::move(sol);
      out.records.push_back(std::move(rec));
      prev2 = prev1;
      prev1 = static_cast<std::ptrdiff_t>(out.records.size()) - 1;
      if (out.records.back().mode == StartMode::warm)
        ++out.warm_restarts;
      else
        ++out.predictor_steps;
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.failure = e.what();
      out.records.push_back(std::move(rec));
      // Continue the grid from the last certified solution.
    }
  }
  return out;
}

}  // namespace tracenorm::regpath
