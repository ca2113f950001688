#include <doctest.h>

#include "support.hpp"
#include "tracenorm/trustregion.hpp"

using namespace tracenorm;
using namespace tracenorm::trustregion;
namespace geo = tracenorm::geometry;
using testsupport::random_horizontal;
using testsupport::random_point;

namespace {

// Quadratic model value <g, s> + 0.5 <s, H s> for explicit comparisons.
double model_value(const geo::FixedRankPoint& x, const geo::TangentVector& g,
                   const HessianOperator& hess, const geo::TangentVector& s) {
  return geo::metric_inner(x, g, s) + 0.5 * geo::metric_inner(x, s, hess(s));
}

}  // namespace

TEST_CASE("tcg trivial cases") {
  auto x = random_point(6, 5, 2, 500);
  TrustRegionConfig cfg;
  HessianOperator identity = [](const geo::TangentVector& xi) { return xi; };

  // Zero gradient: zero step, interior status.
  auto zero = geo::zero_tangent(x);
  auto r0 = tcg_subproblem(x, zero, identity, 1.0, cfg);
  CHECK(r0.status == TcgStatus::interior);
  CHECK(geo::metric_norm(x, r0.step) == 0.0);

  // Identity model with a huge radius: the exact step is -grad.
  auto g = random_horizontal(x, 501);
  auto r1 = tcg_subproblem(x, g, identity, 1e9, cfg);
  CHECK(r1.status == TcgStatus::interior);
  CHECK(geo::metric_norm(x, r1.step + g) <= 1e-10 * geo::metric_norm(x, g));
}

TEST_CASE("tcg negative curvature exits on the boundary") {
  auto x = random_point(6, 5, 2, 510);
  auto e1 = random_horizontal(x, 511);
  e1 *= 1.0 / geo::metric_norm(x, e1);
  auto w = random_horizontal(x, 512);
  w -= geo::metric_inner(x, e1, w) * e1;  // orthogonal complement piece
  w *= 1.0 / geo::metric_norm(x, w);
  // Indefinite model: positive along e1, negative elsewhere; the gradient
  // mixes both so conjugate gradients must encounter the negative direction.
  HessianOperator hess = [&](const geo::TangentVector& xi) {
    const double a = geo::metric_inner(x, e1, xi);
    geo::TangentVector out = (2.0 * a) * e1 - 1.0 * (xi - a * e1);
    out.horizontal = xi.horizontal;
    return out;
  };
  geo::TangentVector grad = e1 + 2.0 * w;
  const double delta = 0.8;
  TrustRegionConfig cfg;
  auto r = tcg_subproblem(x, grad, hess, delta, cfg);
  CHECK(r.status == TcgStatus::negative_curvature);
  CHECK(geo::metric_norm(x, r.step) == doctest::Approx(delta).epsilon(1e-10));
}

TEST_CASE("tcg achieves at least the cauchy decrease") {
  for (std::uint64_t seed : {520u, 521u, 522u}) {
    auto model = testsupport::random_completion_model(8, 6, 2, 0.7, seed);
    auto x = random_point(8, 6, 2, seed + 50);
    const double lambda = 0.1;
    auto egrad = model.euclidean_gradient(x, lambda);
    auto grad = geo::egrad_to_rgrad(x, egrad);
    grad.horizontal = true;
    HessianOperator hess = [&](const geo::TangentVector& xi) {
      auto dg = geo::rgrad_field_directional(
          x, xi, egrad, model.gradient_directional(x, {xi.z_u, xi.z_b, xi.z_v}));
      return geo::apply_hessian(x, xi, grad, dg);
    };
    const double delta = 0.5;
    TrustRegionConfig cfg;
    auto r = tcg_subproblem(x, grad, hess, delta, cfg);

    // Cauchy point: minimize the model along -grad within the radius.
    const double gnorm = geo::metric_norm(x, grad);
    const double ghg = geo::metric_inner(x, grad, hess(grad));
    double t = ghg > 0 ? std::min(gnorm * gnorm / ghg, delta / gnorm) : delta / gnorm;
    geo::TangentVector cauchy = (-t) * grad;
    CHECK(-model_value(x, grad, hess, r.step) >=
          -model_value(x, grad, hess, cauchy) - 1e-10 * std::max(1.0, gnorm * gnorm));
    CHECK(geo::metric_norm(x, r.step) <= delta * (1.0 + 1e-10));
    // Every iterate stays horizontal.
    CHECK(geo::horizontal_defect(x, r.step).norm() <=
          1e-8 * std::max(1.0, geo::metric_norm(x, r.step)));
  }
}

TEST_CASE("fixed rank solve returns immediately at a stationary point") {
  // Exact fit at lambda = 0: the gradient vanishes at the data point.
  auto x = random_point(8, 6, 2, 530);
  const Matrix dense = x.to_dense();
  std::vector<problems::ObservedEntries::Triplet> t;
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 6; ++j) t.push_back({i, j, dense(i, j)});
  problems::MatrixCompletionModel model(problems::ObservedEntries(8, 6, std::move(t)));

  TrustRegionConfig cfg;
  cfg.grad_tol = 1e-6;
  auto res = solve_fixed_rank(model, 0.0, x, cfg);
  CHECK(res.outer_iters == 0);
  CHECK(res.stop == StopReason::gradient);
}

TEST_CASE("fixed rank solve decreases the cost monotonically") {
  auto model = testsupport::random_completion_model(20, 15, 3, 0.6, 540);
  auto x0 = solver::random_point(20, 15, 3, 541, 1e-3);
  TrustRegionConfig cfg;
  std::vector<IterationEvent> events;
  cfg.sink = [&](const IterationEvent& e) { events.push_back(e); };
  auto res = solve_fixed_rank(model, 1e-4, x0, cfg);

  double prev = std::numeric_limits<double>::infinity();
  for (const auto& e : events) {
    if (!e.accepted) continue;
    CHECK(e.cost <= prev + 1e-12);
    prev = e.cost;
  }
  CHECK(res.cost <= model.objective(x0, 1e-4));
  CHECK(res.history.size() == static_cast<size_t>(res.outer_iters));
}

TEST_CASE("identical runs produce identical traces") {
  auto model = testsupport::random_completion_model(15, 12, 2, 0.7, 550);
  auto x0 = solver::random_point(15, 12, 2, 551, 1e-3);
  TrustRegionConfig cfg;
  auto r1 = solve_fixed_rank(model, 1e-3, x0, cfg);
  auto r2 = solve_fixed_rank(model, 1e-3, x0, cfg);
  REQUIRE(r1.history.size() == r2.history.size());
  for (size_t i = 0; i < r1.history.size(); ++i) {
    CHECK(r1.history[i].cost == r2.history[i].cost);
    CHECK(r1.history[i].grad_norm == r2.history[i].grad_norm);
    CHECK(r1.history[i].delta == r2.history[i].delta);
    CHECK(r1.history[i].inner == r2.history[i].inner);
  }
  CHECK(r1.cost == r2.cost);
}

TEST_CASE("config validation") {
  TrustRegionConfig cfg;
  cfg.rho_accept = 0.9;
  cfg.rho_expand = 0.5;
  CHECK_THROWS_AS(cfg.validate(), PreconditionError);
}
