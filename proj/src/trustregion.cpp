#include "tracenorm/trustregion.hpp"

#include <cassert>
#include <cmath>

namespace tracenorm::trustregion {

namespace geo = tracenorm::geometry;

void TrustRegionConfig::validate() const {
  require(0.0 < rho_accept && rho_accept < rho_expand && rho_expand < 1.0,
          "trust region: need 0 < rho_accept < rho_expand < 1");
  require(delta0 > 0.0 && delta0 <= delta_max, "trust region: need 0 < delta0 <= delta_max");
  require(grad_tol > 0.0 && rel_cost_tol > 0.0 && abs_cost_tol > 0.0,
          "trust region: tolerances must be positive");
  require(tcg_kappa > 0.0 && tcg_kappa < 1.0 && tcg_theta >= 0.0,
          "trust region: invalid tcg parameters");
  require(max_outer > 0, "trust region: max_outer must be positive");
}

TcgResult tcg_subproblem(const geo::FixedRankPoint& x, const geo::TangentVector& grad,
                         const HessianOperator& hess, double delta,
                         const TrustRegionConfig& cfg) {
  require(grad.horizontal, "tcg: gradient must be horizontal");
  const int max_inner =
      cfg.max_inner > 0
          ? cfg.max_inner
          : static_cast<int>((x.rows() + x.cols() - x.rank()) * x.rank());

  TcgResult res;
  res.step = geo::zero_tangent(x);

  geo::TangentVector r = grad;  // residual of the Newton system
  double rr = geo::metric_inner(x, r, r);
  const double r0_norm = std::sqrt(std::max(rr, 0.0));
  if (r0_norm == 0.0) return res;  // already at a model minimizer
  const double stop_resid = r0_norm * std::min(cfg.tcg_kappa, std::pow(r0_norm, cfg.tcg_theta));

  geo::TangentVector d = -1.0 * r;  // search direction
  double step_sq = 0.0;             // ||step||^2
  double step_dot_d = 0.0;          // <step, d>
  double dd = rr;                   // <d, d>

  auto model_value = [&](const geo::TangentVector& s, const geo::TangentVector& hs) {
    return geo::metric_inner(x, grad, s) + 0.5 * geo::metric_inner(x, s, hs);
  };
  auto to_boundary = [&](double dBd) {
    // tau >= 0 with ||step + tau d|| = delta.
    const double disc = step_dot_d * step_dot_d + dd * (delta * delta - step_sq);
    const double tau = (-step_dot_d + std::sqrt(std::max(disc, 0.0))) / dd;
    res.step += tau * d;
    geo::TangentVector hstep = hess(res.step);
    res.model_decrease = -model_value(res.step, hstep);
    (void)dBd;
  };

  for (int j = 1; j <= max_inner; ++j) {
    res.iterations = j;
    geo::TangentVector hd = hess(d);
    const double dBd = geo::metric_inner(x, d, hd);
    if (dBd <= 0.0) {
      to_boundary(dBd);
      res.status = TcgStatus::negative_curvature;
      return res;
    }
    const double alpha = rr / dBd;
    const double next_sq = step_sq + 2.0 * alpha * step_dot_d + alpha * alpha * dd;
    if (next_sq >= delta * delta) {
      to_boundary(dBd);
      res.status = TcgStatus::boundary_hit;
      return res;
    }
    res.step += alpha * d;
    step_sq = next_sq;
    r += alpha * hd;
    const double rr_next = geo::metric_inner(x, r, r);
    if (std::sqrt(std::max(rr_next, 0.0)) <= stop_resid) {
      geo::TangentVector hstep = hess(res.step);
      res.model_decrease = -model_value(res.step, hstep);
      res.status = TcgStatus::interior;
      return res;
    }
    const double beta = rr_next / rr;
    rr = rr_next;
    d = -1.0 * r + beta * d;
    // Update the running inner products for the boundary test.
    step_dot_d = beta * (step_dot_d + alpha * dd);
    dd = rr + beta * beta * dd;
  }
  geo::TangentVector hstep = hess(res.step);
  res.model_decrease = -model_value(res.step, hstep);
  res.status = TcgStatus::max_inner;
  return res;
}

FixedRankResult solve_fixed_rank(const problems::ProblemModel& model, double lambda,
                                 const geo::FixedRankPoint& x0, const TrustRegionConfig& cfg) {
  cfg.validate();

  FixedRankResult res{x0};
  double cost = model.objective(res.point, lambda);
  double delta = cfg.delta0;

  auto gradient_at = [&](const geo::FixedRankPoint& pt, geo::AmbientTriple& egrad_out) {
    egrad_out = model.euclidean_gradient(pt, lambda);
    geo::TangentVector g = geo::egrad_to_rgrad(pt, egrad_out);
    // The cost is invariant along the rotational directions, so its gradient
    // is horizontal already.
    g.horizontal = true;
    return g;
  };

  geo::AmbientTriple egrad;
  geo::TangentVector grad = gradient_at(res.point, egrad);
  double grad_norm = geo::metric_norm(res.point, grad);

  for (int outer = 1; outer <= cfg.max_outer; ++outer) {
    if (grad_norm <= cfg.grad_tol) {
      res.stop = StopReason::gradient;
      break;
    }

    const geo::FixedRankPoint& x = res.point;
    HessianOperator hess = [&](const geo::TangentVector& xi) {
      geo::AmbientTriple egrad_dot = model.gradient_directional(x, {xi.z_u, xi.z_b, xi.z_v});
      geo::AmbientTriple dg = geo::rgrad_field_directional(x, xi, egrad, egrad_dot);
      return geo::apply_hessian(x, xi, grad, dg);
    };

    TcgResult sub = tcg_subproblem(x, grad, hess, delta, cfg);
    res.inner_iters += sub.iterations;

    IterationEvent ev;
    ev.outer = outer;
    ev.delta = delta;
    ev.inner = sub.iterations;

    bool accepted = false;
    double cost_new = cost;
    double rho = 0.0;
    bool retraction_failed = false;
    try {
      geo::FixedRankPoint candidate = geo::retract(x, sub.step);
      cost_new = model.objective(candidate, lambda);
      if (sub.model_decrease <= 1e-15 * std::max(1.0, std::abs(cost))) {
        // The model is flat at numerical precision; further progress is noise.
        res.outer_iters = outer;
        ev.cost = cost;
        ev.grad_norm = grad_norm;
        res.history.push_back(ev);
        if (cfg.sink) cfg.sink(ev);
        res.stop = StopReason::cost_stagnation;
        res.cost = cost;
        res.grad_norm = grad_norm;
        return res;
      }
      rho = (cost - cost_new) / sub.model_decrease;
      if (rho >= cfg.rho_accept && cost_new <= cost) {
        accepted = true;
        res.point = std::move(candidate);
      }
    } catch (const SingularityError&) {
      // Retraction left the rank-p set; treat as a rejected step and shrink.
      retraction_failed = true;
    } catch (const PreconditionError&) {
      retraction_failed = true;
    }

    if (accepted) {
      const double drop = cost - cost_new;
      cost = cost_new;
      grad = gradient_at(res.point, egrad);
      grad_norm = geo::metric_norm(res.point, grad);
      ev.accepted = true;
      ev.rho = rho;
      ev.cost = cost;
      ev.grad_norm = grad_norm;
      res.outer_iters = outer;
      res.history.push_back(ev);
      if (cfg.sink) cfg.sink(ev);
      if (drop <= cfg.abs_cost_tol || drop <= cfg.rel_cost_tol * std::abs(cost)) {
        res.stop = StopReason::cost_stagnation;
        res.cost = cost;
        res.grad_norm = grad_norm;
        return res;
      }
    } else {
      ev.accepted = false;
      ev.rho = retraction_failed ? std::numeric_limits<double>::quiet_NaN() : rho;
      ev.cost = cost;
      ev.grad_norm = grad_norm;
      res.outer_iters = outer;
      res.history.push_back(ev);
      if (cfg.sink) cfg.sink(ev);
    }

    // Radius update.
    if (retraction_failed || rho < 0.25) {
      delta *= 0.25;
      if (delta < 1e-15 * cfg.delta0) {
        res.stop = StopReason::cost_stagnation;
        res.cost = cost;
        res.grad_norm = grad_norm;
        return res;
      }
    } else if (rho > cfg.rho_expand && (sub.status == TcgStatus::boundary_hit ||
                                        sub.status == TcgStatus::negative_curvature)) {
      delta = std::min(2.0 * delta, cfg.delta_max);
    }
    res.stop = StopReason::max_iters;
  }

  if (grad_norm <= cfg.grad_tol) res.stop = StopReason::gradient;
  res.cost = cost;
  res.grad_norm = grad_norm;
  return res;
}

}  // namespace tracenorm::trustregion
