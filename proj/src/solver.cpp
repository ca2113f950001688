#include "tracenorm/solver.hpp"

#include <chrono>
#include <cmath>

#include "tracenorm/rng.hpp"

namespace tracenorm::solver {

namespace geo = tracenorm::geometry;

void SolverConfig::validate(Index rows, Index cols) const {
  require(initial_rank >= 1, "solver: initial_rank must be at least 1");
  require(epsilon_sigma > 0.0 && epsilon_gap > 0.0, "solver: thresholds must be positive");
  require(epsilon_gap_abs >= 0.0, "solver: absolute gap threshold must be nonnegative");
  const Index cap = max_rank > 0 ? max_rank : std::min(rows, cols);
  require(cap >= initial_rank && cap <= std::min(rows, cols),
          "solver: rank cap out of range");
  require(backtrack_shrink > 0.0 && backtrack_shrink < 1.0, "solver: invalid backtrack factor");
  require(armijo_c > 0.0 && armijo_c < 1.0, "solver: invalid armijo constant");
}

geo::FixedRankPoint random_point(Index rows, Index cols, Index rank, std::uint64_t seed,
                                 double b_scale) {
  auto eng = rng::engine(rng::stream_seed(seed, "initializer"));
  Matrix u = rng::orthonormal(rows, rank, eng);
  Matrix v = rng::orthonormal(cols, rank, eng);
  linalg::SpdMatrix b(b_scale * Matrix::Identity(rank, rank));
  return geo::FixedRankPoint(std::move(u), std::move(b), std::move(v));
}

CertificateReport check_certificate(const geo::FixedRankPoint& x,
                                    const problems::ProblemModel& model, double lambda,
                                    const SolverConfig& cfg) {
  CertificateReport rep;
  linalg::LinearOperator s = model.dual_operator(x);
  linalg::SingularTriplet top = linalg::dominant_singular_triplet(
      s, cfg.triplet_tol, cfg.triplet_max_iter_factor * std::max(s.rows, s.cols));
  rep.sigma1 = top.sigma;
  rep.sigma_gap = top.sigma - lambda;
  rep.u = std::move(top.u);
  rep.v = std::move(top.v);

  problems::GapReport gap = model.duality_gap(x, lambda, top.sigma);
  rep.gap = gap.gap;
  rep.rel_gap = gap.relative();

  if (rep.sigma_gap <= cfg.epsilon_sigma) {
    rep.certified = true;
    rep.which = Certificate::sigma;
  } else if (rep.rel_gap <= cfg.epsilon_gap ||
             (cfg.epsilon_gap_abs > 0.0 && rep.gap <= cfg.epsilon_gap_abs)) {
    rep.certified = true;
    rep.which = Certificate::gap;
  }
  return rep;
}

RankOneStep rank_one_update(const geo::FixedRankPoint& x, const problems::ProblemModel& model,
                            double lambda, double lipschitz, const SolverConfig& cfg,
                            const linalg::SingularTriplet& dominant) {
  const double sigma_excess = dominant.sigma - lambda;
  require(sigma_excess > 0.0, "rank_one_update: certificate already holds");
  require(lipschitz > 0.0, "rank_one_update: lipschitz constant must be positive");

  RankOneStep step;
  step.u = dominant.u;
  step.v = dominant.v;
  step.sigma1 = dominant.sigma;

  const double phi = model.objective(x, lambda);
  double beta = sigma_excess / lipschitz;
  const double beta0 = beta;
  while (true) {
    const double bound = cfg.armijo_c * beta * (sigma_excess - 0.5 * lipschitz * beta);
    geo::FixedRankPoint candidate = embed_rank_increment(x, beta, step.u, step.v);
    const double phi_new = model.objective(candidate, lambda);
    if (phi_new <= phi - bound && bound > 0.0) {
      step.beta = beta;
      return step;
    }
    beta *= cfg.backtrack_shrink;
    ++step.backtracks;
    if (beta < 1e-16 * beta0)
      throw DegenerateUpdateError(
          "rank_one_update: backtracking underflow; stopping certificate should have fired");
  }
}

geo::FixedRankPoint embed_rank_increment(const geo::FixedRankPoint& x, double beta,
                                         const Vector& u, const Vector& v) {
  require(beta > 0.0, "embed_rank_increment: beta must be positive");
  require_dims(u.size() == x.rows() && v.size() == x.cols(),
               "embed_rank_increment: vector dimensions mismatch");
  const Index p = x.rank();
  const Matrix& b = x.b().matrix();

  // Components of u and -beta v orthogonal to the current factors.
  Vector ut_u = x.u().transpose() * u;          // p
  Vector u_perp = u - x.u() * ut_u;             // n
  Vector vt_v = x.v().transpose() * v;          // p
  Vector v_perp = -beta * (v - x.v() * vt_v);   // m

  double nu = u_perp.norm();
  double nv = v_perp.norm();
  const double floor = 1e-14;

  auto fresh_direction = [](const Matrix& basis, std::uint64_t salt) {
    auto eng = rng::engine(rng::mix(0x0e5cabe5u ^ salt));
    Vector w = rng::gaussian(basis.rows(), 1, eng).col(0);
    w -= basis * (basis.transpose() * w);
    w -= basis * (basis.transpose() * w);  // second pass for orthogonality
    return Vector(w / w.norm());
  };

  // When the update direction lies inside the current subspace the expansion
  // column is arbitrary; complete with a fresh direction and zero coupling.
  bool u_degenerate = nu < floor;
  bool v_degenerate = nv < floor;
  if (u_degenerate) {
    u_perp = fresh_direction(x.u(), 1);
    nu = 0.0;
  } else {
    u_perp /= nu;
  }
  if (v_degenerate) {
    v_perp = fresh_direction(x.v(), 2);
    nv = 0.0;
  } else {
    v_perp /= nv;
  }

  // Core factor: [I ut_u; 0 nu] diag(B, 1) [I -beta vt_v; 0 nv]^T, size p+1.
  Matrix left = Matrix::Zero(p + 1, p + 1);
  left.topLeftCorner(p, p) = Matrix::Identity(p, p);
  left.block(0, p, p, 1) = ut_u;
  left(p, p) = nu;
  Matrix right = Matrix::Zero(p + 1, p + 1);
  right.topLeftCorner(p, p) = Matrix::Identity(p, p);
  right.block(0, p, p, 1) = -beta * vt_v;
  right(p, p) = nv;
  Matrix mid = Matrix::Zero(p + 1, p + 1);
  mid.topLeftCorner(p, p) = b;
  mid(p, p) = 1.0;
  Matrix core = left * mid * right.transpose();

  linalg::Svd svd = linalg::small_svd(core);
  // Keep the factorization strictly positive definite; a zero singular value
  // can only appear through a degenerate update direction.
  Vector sigma = svd.sigma;
  const double sigma_floor = 1e-12 * (sigma.size() > 0 ? sigma(0) : 1.0);
  for (Index i = 0; i < sigma.size(); ++i) sigma(i) = std::max(sigma(i), sigma_floor);

  Matrix u_ext(x.rows(), p + 1);
  u_ext.leftCols(p) = x.u();
  u_ext.col(p) = u_perp;
  Matrix v_ext(x.cols(), p + 1);
  v_ext.leftCols(p) = x.v();
  v_ext.col(p) = v_perp;

  Matrix u_new = u_ext * svd.p;
  Matrix v_new = v_ext * svd.q;
  Matrix b_new = sigma.asDiagonal();
  return geo::FixedRankPoint(std::move(u_new), linalg::SpdMatrix(std::move(b_new)),
                             std::move(v_new));
}

ConvexSolution minimize(const problems::ProblemModel& model, double lambda,
                        const SolverConfig& cfg, std::optional<geo::FixedRankPoint> x0) {
  require(lambda > 0.0, "minimize: lambda must be positive");
  cfg.validate(model.rows(), model.cols());
  const auto t_start = std::chrono::steady_clock::now();

  geo::FixedRankPoint x = x0 ? std::move(*x0)
                             : random_point(model.rows(), model.cols(), cfg.initial_rank,
                                            cfg.init_seed, cfg.initial_b_scale);
  require_dims(x.rows() == model.rows() && x.cols() == model.cols(),
               "minimize: starting point does not match problem dimensions");

  const Index rank_cap = cfg.max_rank > 0 ? cfg.max_rank : std::min(model.rows(), model.cols());
  const double lipschitz = model.lipschitz_estimate();

  ConvexSolution sol{x};
  sol.lambda = lambda;

  while (true) {
    trustregion::TrustRegionConfig tr = cfg.tr;
    if (cfg.max_tr_iters_per_rank > 0)
      tr.max_outer = std::min(tr.max_outer, cfg.max_tr_iters_per_rank);
    trustregion::FixedRankResult fixed = trustregion::solve_fixed_rank(model, lambda, x, tr);
    x = fixed.point;

    CertificateReport cert = check_certificate(x, model, lambda, cfg);

    RankStageRecord stage;
    stage.rank = static_cast<int>(x.rank());
    stage.cost = fixed.cost;
    stage.grad_norm = fixed.grad_norm;
    stage.sigma_gap = cert.sigma_gap;
    stage.rel_gap = cert.rel_gap;
    stage.outer_iters = fixed.outer_iters;
    stage.inner_iters = fixed.inner_iters;
    stage.iterations = std::move(fixed.history);
    sol.total_outer_iters += fixed.outer_iters;
    sol.total_inner_iters += fixed.inner_iters;
    sol.stages.push_back(std::move(stage));

    sol.point = x;
    sol.rank = static_cast<int>(x.rank());
    sol.sigma_gap = cert.sigma_gap;
    sol.duality_gap = cert.gap;
    sol.rel_duality_gap = cert.rel_gap;
    sol.certificate = cert.which;

    if (cert.certified) break;
    if (x.rank() >= rank_cap) break;  // returned uncertified; best effort

    linalg::SingularTriplet dominant{cert.sigma1, cert.u, cert.v, 0};
    RankOneStep step = rank_one_update(x, model, lambda, lipschitz, cfg, dominant);

    RankIncrementRecord inc;
    inc.from_rank = static_cast<int>(x.rank());
    inc.lambda = lambda;
    inc.sigma1 = step.sigma1;
    inc.lipschitz = lipschitz;
    inc.beta = step.beta;
    inc.backtracks = step.backtracks;
    inc.objective_before = model.objective(x, lambda);

    x = embed_rank_increment(x, step.beta, step.u, step.v);
    inc.objective_after = model.objective(x, lambda);
    sol.increments.push_back(inc);
  }

  sol.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return sol;
}

}  // namespace tracenorm::solver
