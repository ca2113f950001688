#pragma once

#include <functional>
#include <vector>

#include "tracenorm/geometry.hpp"
#include "tracenorm/problems.hpp"
#include "tracenorm/types.hpp"

// Riemannian trust-region loop with a truncated conjugate gradient inner
// solver working in the horizontal space. Solves the fixed-rank problem to a
// local minimum; one solve owns its state exclusively, independent solves may
// run concurrently.

namespace tracenorm::trustregion {

// One outer iteration of the loop, as reported to the trace sink.
struct IterationEvent {
  int outer = 0;
  double cost = 0.0;
  double grad_norm = 0.0;
  double delta = 0.0;   // radius used for the step
  double rho = 0.0;     // actual / predicted reduction
  int inner = 0;        // conjugate gradient iterations
  bool accepted = false;
};

using IterationSink = std::function<void(const IterationEvent&)>;

struct TrustRegionConfig {
  double delta0 = 1.0;
  double delta_max = 1024.0;
  double rho_accept = 0.1;   // step acceptance threshold
  double rho_expand = 0.75;  // radius expansion threshold
  double tcg_kappa = 0.1;    // residual reduction factor
  double tcg_theta = 1.0;    // superlinear exponent
  double grad_tol = 1e-7;
  double rel_cost_tol = 1e-10;
  double abs_cost_tol = 1e-10;
  int max_outer = 500;
  int max_inner = 0;  // 0 selects the manifold dimension (n + m - p) * p
  IterationSink sink;

  void validate() const;
};

enum class StopReason { gradient, cost_stagnation, max_iters };

struct FixedRankResult {
  geometry::FixedRankPoint point;
  double cost = 0.0;
  double grad_norm = 0.0;
  int outer_iters = 0;
  int inner_iters = 0;
  StopReason stop = StopReason::max_iters;
  std::vector<IterationEvent> history;
};

enum class TcgStatus { interior, boundary_hit, negative_curvature, max_inner };

struct TcgResult {
  geometry::TangentVector step;
  TcgStatus status = TcgStatus::interior;
  int iterations = 0;
  double model_decrease = 0.0;  // predicted reduction of the quadratic model
};

using HessianOperator = std::function<geometry::TangentVector(const geometry::TangentVector&)>;

// Steihaug-Toint truncated conjugate gradient on the quadratic model
// m(s) = <grad, s> + 0.5 <s, H s> within ||s|| <= delta, all in the metric at
// x. Stops on the residual test ||r_j|| <= ||r_0|| min(kappa, ||r_0||^theta),
// on crossing the boundary, or on detecting negative curvature (then follows
// the direction to the boundary). The returned step never does worse than
// the Cauchy point.
TcgResult tcg_subproblem(const geometry::FixedRankPoint& x, const geometry::TangentVector& grad,
                         const HessianOperator& hess, double delta,
                         const TrustRegionConfig& cfg);

FixedRankResult solve_fixed_rank(const problems::ProblemModel& model, double lambda,
                                 const geometry::FixedRankPoint& x0,
                                 const TrustRegionConfig& cfg);

}  // namespace tracenorm::trustregion
