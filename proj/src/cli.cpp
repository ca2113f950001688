#include "tracenorm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tracenorm/datagen.hpp"
#include "tracenorm/io.hpp"
#include "tracenorm/oracle.hpp"
#include "tracenorm/regpath.hpp"
#include "tracenorm/solver.hpp"

namespace tracenorm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ----- configuration plumbing ---------------------------------------------

// Options common to every solving command.
struct SolveOptions {
  std::uint64_t seed = 1;
  int rank0 = 1;
  int max_rank = 0;
  double eps_sigma = 1e-5;
  double eps_gap = 1e-5;
  double eps_gap_abs = 0.0;
  double ridge = 0.0;
  bool trace = false;
  int threads = 0;
  std::string out;
};

void add_solver_flags(CLI::App* cmd, SolveOptions& o) {
  cmd->add_option("--seed", o.seed, "seed of the random initializer stream");
  cmd->add_option("--rank0", o.rank0, "starting rank of the incremental solver");
  cmd->add_option("--max-rank", o.max_rank, "rank cap (0 = min(n, m))");
  cmd->add_option("--eps-sigma", o.eps_sigma,
                  "stopping threshold on sigma_1 - lambda, relative to the data "
                  "gradient scale");
  cmd->add_option("--eps-gap", o.eps_gap, "stopping threshold on the relative duality gap");
  cmd->add_option("--eps-gap-abs", o.eps_gap_abs,
                  "optional absolute duality-gap threshold (0 = off)");
  cmd->add_option("--ridge", o.ridge, "strict-convexity ridge coefficient mu");
  cmd->add_flag("--trace", o.trace, "write a JSONL iteration trace");
  cmd->add_option("--threads", o.threads, "worker threads for the parallel kernels (0 = default)");
  cmd->add_option("--out", o.out, "output directory")->required();
}

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

// sigma-threshold scale: the dual-variable magnitude at X = 0, so the default
// epsilon is problem-size independent.
solver::SolverConfig build_solver_config(const SolveOptions& o,
                                         const problems::ProblemModel& model) {
  solver::SolverConfig cfg;
  cfg.initial_rank = o.rank0;
  cfg.max_rank = o.max_rank;
  const double scale = 0.5 * model.gradient_norm_at_zero();
  cfg.epsilon_sigma = o.eps_sigma * (scale > 0 ? scale : 1.0);
  cfg.epsilon_gap = o.eps_gap;
  cfg.epsilon_gap_abs = o.eps_gap_abs;
  cfg.init_seed = o.seed;
  return cfg;
}

json solver_config_json(const SolveOptions& o, const solver::SolverConfig& cfg) {
  json j;
  j["seed"] = o.seed;
  j["rank0"] = o.rank0;
  j["max_rank"] = o.max_rank;
  j["eps_sigma"] = o.eps_sigma;
  j["eps_sigma_effective"] = cfg.epsilon_sigma;
  j["eps_gap"] = o.eps_gap;
  j["eps_gap_abs"] = o.eps_gap_abs;
  j["ridge"] = o.ridge;
  j["threads"] = o.threads;
  return j;
}

// Expands `--config file.json` into synthetic leading flags so explicit
// command-line flags (parsed later) take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string config_path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (config_path.empty() || args.empty()) return args;

  const json cfg = io::read_json(config_path);
  std::vector<std::string> expanded;
  expanded.push_back(args[0]);  // subcommand first
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (it.value().is_boolean()) {
      if (it.value().get<bool>()) expanded.push_back("--" + it.key());
    } else {
      expanded.push_back("--" + it.key());
      expanded.push_back(it.value().is_string() ? it.value().get<std::string>()
                                                : it.value().dump());
    }
  }
  expanded.insert(expanded.end(), args.begin() + 1, args.end());
  return expanded;
}

// ----- data loading ---------------------------------------------------------

struct CompletionData {
  problems::ObservedEntries observed;
  std::optional<Matrix> truth_left, truth_right;
};

CompletionData load_completion(const fs::path& dir) {
  CompletionData d{io::read_matrix_market(dir / "observed.mtx"), {}, {}};
  if (fs::exists(dir / "truth_left.csv") && fs::exists(dir / "truth_right.csv")) {
    d.truth_left = io::read_dense_csv(dir / "truth_left.csv");
    d.truth_right = io::read_dense_csv(dir / "truth_right.csv");
  }
  return d;
}

struct RegressionFiles {
  Matrix x_train, y_train;
  std::optional<Matrix> x_test, y_test;
};

RegressionFiles load_regression(const fs::path& dir) {
  RegressionFiles d;
  d.x_train = io::read_dense_csv(dir / "X_train.csv");
  d.y_train = io::read_dense_csv(dir / "Y_train.csv");
  if (fs::exists(dir / "X_test.csv") && fs::exists(dir / "Y_test.csv")) {
    d.x_test = io::read_dense_csv(dir / "X_test.csv");
    d.y_test = io::read_dense_csv(dir / "Y_test.csv");
  }
  return d;
}

// ----- output helpers -------------------------------------------------------

void write_point(const fs::path& dir, const geometry::FixedRankPoint& x) {
  io::write_dense_csv(dir / "U.csv", x.u());
  io::write_dense_csv(dir / "B.csv", x.b().matrix());
  io::write_dense_csv(dir / "V.csv", x.v());
}

const char* mode_name(regpath::StartMode m) {
  return m == regpath::StartMode::warm ? "warm" : "predicted";
}

const char* certificate_name(solver::Certificate c) {
  switch (c) {
    case solver::Certificate::sigma: return "sigma";
    case solver::Certificate::gap: return "gap";
    default: return "none";
  }
}

json solution_summary(const solver::ConvexSolution& sol) {
  json j;
  j["lambda"] = sol.lambda;
  j["rank"] = sol.rank;
  j["certified"] = sol.certified();
  j["certificate"] = certificate_name(sol.certificate);
  j["sigma_gap"] = sol.sigma_gap;
  j["duality_gap"] = sol.duality_gap;
  j["rel_duality_gap"] = sol.rel_duality_gap;
  j["outer_iterations"] = sol.total_outer_iters;
  j["inner_iterations"] = sol.total_inner_iters;
  j["wall_seconds"] = sol.wall_seconds;
  return j;
}

void write_solution_trace(io::TraceWriter& tw, const solver::ConvexSolution& sol) {
  for (const auto& stage : sol.stages) {
    for (const auto& it : stage.iterations) {
      tw.event({{"kind", "tr_iter"},
                {"lambda", sol.lambda},
                {"rank", stage.rank},
                {"outer", it.outer},
                {"cost", it.cost},
                {"grad_norm", it.grad_norm},
                {"delta", it.delta},
                {"rho", it.rho},
                {"inner", it.inner},
                {"accepted", it.accepted}});
    }
    tw.event({{"kind", "stage"},
              {"lambda", sol.lambda},
              {"rank", stage.rank},
              {"cost", stage.cost},
              {"grad_norm", stage.grad_norm},
              {"sigma_gap", stage.sigma_gap},
              {"rel_gap", stage.rel_gap},
              {"outer_iters", stage.outer_iters},
              {"inner_iters", stage.inner_iters}});
  }
  for (const auto& inc : sol.increments) {
    tw.event({{"kind", "rank_increment"},
              {"lambda", sol.lambda},
              {"from_rank", inc.from_rank},
              {"sigma1", inc.sigma1},
              {"beta", inc.beta},
              {"backtracks", inc.backtracks},
              {"objective_before", inc.objective_before},
              {"objective_after", inc.objective_after}});
  }
}

// ----- gen ------------------------------------------------------------------

struct GenOptions {
  std::string problem = "completion";
  Index n = 100, m = 100, q = 0, k = 0, rank = 10;
  double os = 0.0, fraction = 0.0;
  double noise_sigma = 0.0, snr = 0.0;
  double split = 0.7;
  std::uint64_t seed = 0;
  std::string out;
  bool seed_given = false;
};

int run_gen(const GenOptions& o) {
  if (!o.seed_given) throw ParameterError("gen: --seed is required");
  fs::create_directories(o.out);
  const fs::path dir(o.out);

  json meta;
  meta["problem"] = o.problem;
  meta["seed"] = o.seed;
  meta["rank"] = o.rank;

  if (o.problem == "completion") {
    Index nnz;
    if (o.fraction > 0.0)
      nnz = static_cast<Index>(std::llround(o.fraction * static_cast<double>(o.n * o.m)));
    else if (o.os > 0.0)
      nnz = datagen::entries_for_oversampling(o.n, o.m, o.rank, o.os);
    else
      throw ParameterError("gen: completion needs --os or --fraction");
    auto inst = datagen::make_completion_instance(o.n, o.m, o.rank, nnz, o.seed);
    io::write_matrix_market(dir / "observed.mtx", inst.observed);
    io::write_dense_csv(dir / "truth_left.csv", inst.left);
    io::write_dense_csv(dir / "truth_right.csv", inst.right);
    meta["n"] = o.n;
    meta["m"] = o.m;
    meta["nnz"] = nnz;
    meta["os"] = o.os;
    meta["fraction"] = static_cast<double>(nnz) / static_cast<double>(o.n * o.m);
    std::cout << "wrote completion instance: " << o.n << "x" << o.m << " rank " << o.rank
              << ", " << nnz << " observed entries -> " << dir << "\n";
  } else if (o.problem == "regression") {
    const Index q = o.q > 0 ? o.q : o.m;
    const Index k = o.k > 0 ? o.k : o.rank * 2;
    auto inst = datagen::make_regression_instance(o.n, q, k, o.rank, o.split, o.snr,
                                                  o.noise_sigma, o.seed);
    io::write_dense_csv(dir / "X_train.csv", inst.x_train);
    io::write_dense_csv(dir / "Y_train.csv", inst.y_train);
    io::write_dense_csv(dir / "X_test.csv", inst.x_test);
    io::write_dense_csv(dir / "Y_test.csv", inst.y_test);
    io::write_dense_csv(dir / "W_star.csv", inst.w_star);
    meta["n"] = o.n;
    meta["q"] = q;
    meta["k"] = k;
    meta["split"] = o.split;
    meta["snr"] = o.snr;
    meta["noise_sigma"] = inst.noise_sigma;
    meta["train_idx"] = inst.train_idx;
    meta["test_idx"] = inst.test_idx;
    std::cout << "wrote regression instance: " << o.n << "x" << q << " -> " << k << " responses,"
              << " rank " << o.rank << ", noise sigma " << inst.noise_sigma << " -> " << dir
              << "\n";
  } else {
    throw ParameterError("gen: unknown problem '" + o.problem + "'");
  }
  io::write_json(dir / "meta.json", meta);
  return exit_ok;
}

// ----- complete / regress ---------------------------------------------------

int run_complete(const std::string& data_dir, double lambda, const SolveOptions& o) {
  apply_threads(o.threads);
  CompletionData data = load_completion(data_dir);
  problems::MatrixCompletionModel model(std::move(data.observed), o.ridge);

  solver::SolverConfig cfg = build_solver_config(o, model);
  fs::create_directories(o.out);
  io::write_json(fs::path(o.out) / "config.json", solver_config_json(o, cfg));

  solver::ConvexSolution sol = solver::minimize(model, lambda, cfg);

  json summary = solution_summary(sol);
  summary["objective"] = model.objective(sol.point, lambda);
  summary["training_error"] = model.masked_residual_sq(sol.point);
  if (data.truth_left) {
    summary["rel_reconstruction_error"] =
        problems::relative_reconstruction_error(*data.truth_left, *data.truth_right, sol.point);
  }
  write_point(o.out, sol.point);
  io::write_json(fs::path(o.out) / "summary.json", summary);
  if (o.trace) {
    io::TraceWriter tw(fs::path(o.out) / "trace.jsonl");
    write_solution_trace(tw, sol);
  }
  std::cout << summary.dump(2) << "\n";
  return sol.certified() ? exit_ok : exit_uncertified;
}

int run_regress(const std::string& data_dir, double lambda, const SolveOptions& o) {
  apply_threads(o.threads);
  RegressionFiles data = load_regression(data_dir);
  problems::RegressionData reg{std::move(data.x_train), std::move(data.y_train), true, o.ridge};
  problems::MultivariateRegressionModel model(std::move(reg));

  solver::SolverConfig cfg = build_solver_config(o, model);
  fs::create_directories(o.out);
  io::write_json(fs::path(o.out) / "config.json", solver_config_json(o, cfg));

  solver::ConvexSolution sol = solver::minimize(model, lambda, cfg);

  json summary = solution_summary(sol);
  summary["objective"] = model.objective(sol.point, lambda);
  if (data.x_test)
    summary["test_rmse"] = problems::regression_rmse(*data.x_test, *data.y_test, sol.point);
  write_point(o.out, sol.point);
  io::write_json(fs::path(o.out) / "summary.json", summary);
  if (o.trace) {
    io::TraceWriter tw(fs::path(o.out) / "trace.jsonl");
    write_solution_trace(tw, sol);
  }
  std::cout << summary.dump(2) << "\n";
  return sol.certified() ? exit_ok : exit_uncertified;
}

// ----- path -----------------------------------------------------------------

struct PathOptions {
  std::string problem = "completion";
  std::string data;
  double lambda_max = 0.0;
  double lambda_min = 1e-3;
  double gamma = 0.95;
  std::string predictor = "on";
  SolveOptions solve;
};

int run_path(const PathOptions& po) {
  apply_threads(po.solve.threads);
  std::unique_ptr<problems::ProblemModel> model;
  std::optional<Matrix> x_test, y_test;
  if (po.problem == "completion") {
    CompletionData data = load_completion(po.data);
    model = std::make_unique<problems::MatrixCompletionModel>(std::move(data.observed),
                                                              po.solve.ridge);
  } else if (po.problem == "regression") {
    RegressionFiles data = load_regression(po.data);
    x_test = std::move(data.x_test);
    y_test = std::move(data.y_test);
    problems::RegressionData reg{std::move(data.x_train), std::move(data.y_train), true,
                                 po.solve.ridge};
    model = std::make_unique<problems::MultivariateRegressionModel>(std::move(reg));
  } else {
    throw ParameterError("path: unknown problem '" + po.problem + "'");
  }

  regpath::PathConfig cfg;
  cfg.lambda_max = po.lambda_max;
  cfg.lambda_min = po.lambda_min;
  cfg.gamma = po.gamma;
  cfg.predictor_enabled = po.predictor != "off";
  cfg.solver_cfg = build_solver_config(po.solve, *model);

  fs::create_directories(po.solve.out);
  {
    json c = solver_config_json(po.solve, cfg.solver_cfg);
    c["lambda_max"] = po.lambda_max;
    c["lambda_min"] = po.lambda_min;
    c["gamma"] = po.gamma;
    c["predictor"] = cfg.predictor_enabled;
    io::write_json(fs::path(po.solve.out) / "config.json", c);
  }

  regpath::PathResult path = regpath::compute_path(*model, cfg);

  const fs::path dir(po.solve.out);
  std::ofstream csv(dir / "path.csv");
  csv << "lambda,rank,objective,gap,sigma_gap,iterations,mode,inaccuracy,inaccuracy_warm,"
         "certified";
  if (x_test) csv << ",test_rmse";
  csv << "\n";
  csv.precision(17);

  io::TraceWriter tw;
  if (po.solve.trace) tw = io::TraceWriter(dir / "trace.jsonl");

  bool all_certified = true;
  int total_iters = 0;
  for (const auto& rec : path.records) {
    if (rec.failed) {
      all_certified = false;
      csv << rec.lambda << ",-1,nan,nan,nan,0,failed,nan,nan,false";
      if (x_test) csv << ",nan";
      csv << "\n";
      continue;
    }
    const auto& sol = rec.solution;
    all_certified = all_certified && sol.certified();
    total_iters += rec.iterations;
    csv << rec.lambda << "," << rec.rank << "," << model->objective(sol.point, rec.lambda) << ","
        << rec.rel_gap << "," << rec.sigma_gap << "," << rec.iterations << ","
        << mode_name(rec.mode) << "," << rec.inaccuracy_predicted << "," << rec.inaccuracy_warm
        << "," << (sol.certified() ? "true" : "false");
    if (x_test) csv << "," << problems::regression_rmse(*x_test, *y_test, sol.point);
    csv << "\n";
    if (po.solve.trace) write_solution_trace(tw, sol);
  }

  json summary;
  summary["lambda_values"] = path.records.size();
  summary["warm_restarts"] = path.warm_restarts;
  summary["predictor_steps"] = path.predictor_steps;
  summary["total_tr_iterations"] = total_iters;
  summary["all_certified"] = all_certified;
  io::write_json(dir / "summary.json", summary);
  std::cout << summary.dump(2) << "\n";
  return all_certified ? exit_ok : exit_uncertified;
}

// ----- check ----------------------------------------------------------------

struct CheckOptions {
  std::string problem = "completion";
  Index n = 10, m = 8, q = 0, k = 0, rank = 2;
  double fraction = 0.8;
  std::vector<double> lambdas{1e-3, 1e-1, 1.0};
  std::uint64_t seed = 7;
  double ridge = 0.0;
  std::string out;
  int threads = 0;
};

int run_check(const CheckOptions& o) {
  apply_threads(o.threads);
  std::unique_ptr<problems::ProblemModel> model;
  if (o.problem == "completion") {
    const Index nnz =
        static_cast<Index>(std::llround(o.fraction * static_cast<double>(o.n * o.m)));
    auto inst = datagen::make_completion_instance(o.n, o.m, o.rank, nnz, o.seed);
    model = std::make_unique<problems::MatrixCompletionModel>(std::move(inst.observed), o.ridge);
  } else if (o.problem == "regression") {
    const Index q = o.q > 0 ? o.q : 6;
    const Index k = o.k > 0 ? o.k : 5;
    auto inst = datagen::make_regression_instance(o.n, q, k, o.rank, 0.7, 0.0, 0.0, o.seed);
    problems::RegressionData reg{std::move(inst.x_train), std::move(inst.y_train), false,
                                 o.ridge};
    model = std::make_unique<problems::MultivariateRegressionModel>(std::move(reg));
  } else {
    throw ParameterError("check: unknown problem '" + o.problem + "'");
  }
  if (static_cast<double>(model->rows()) * static_cast<double>(model->cols()) > 1e6)
    throw ParameterError("check: instance too large for the dense reference solver");

  SolveOptions so;
  so.seed = o.seed;
  so.ridge = o.ridge;
  solver::SolverConfig cfg = build_solver_config(so, *model);

  json report = json::array();
  bool inconclusive = false;
  bool disagree = false;
  for (double lambda : o.lambdas) {
    solver::ConvexSolution sol = solver::minimize(*model, lambda, cfg);
    oracle::OracleResult ref = oracle::solve_convex_dense(*model, lambda);

    const double obj_solver = model->objective(sol.point, lambda);
    const double obj_diff =
        std::abs(obj_solver - ref.objective) / std::max(std::abs(ref.objective), 1e-30);
    const Index rank_solver = oracle::numerical_rank(sol.point.to_dense());
    const Index rank_oracle = oracle::numerical_rank(ref.x);

    const bool oracle_ok = ref.converged && ref.rel_gap <= 1e-8;
    const bool match = obj_diff <= 1e-5 && rank_solver == rank_oracle;
    if (!oracle_ok) inconclusive = true;
    else if (!match) disagree = true;

    json row;
    row["lambda"] = lambda;
    row["solver_objective"] = obj_solver;
    row["oracle_objective"] = ref.objective;
    row["objective_rel_diff"] = obj_diff;
    row["solver_rank"] = rank_solver;
    row["oracle_rank"] = rank_oracle;
    row["solver_rel_gap"] = sol.rel_duality_gap;
    row["oracle_rel_gap"] = ref.rel_gap;
    row["oracle_converged"] = ref.converged;
    row["status"] = !oracle_ok ? "inconclusive" : (match ? "pass" : "disagree");
    report.push_back(row);
    std::cout << "lambda " << lambda << ": " << row["status"].get<std::string>()
              << " (objective rel diff " << obj_diff << ", ranks " << rank_solver << "/"
              << rank_oracle << ")\n";
  }
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    io::write_json(fs::path(o.out) / "report.json", report);
  }
  if (disagree) return exit_numerical;
  if (inconclusive) return exit_uncertified;
  return exit_ok;
}

}  // namespace

int run(std::vector<std::string> args) {
  CLI::App app{"Low-rank solver for trace-norm regularized convex programs"};
  app.require_subcommand(1);

  GenOptions go;
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  gen->add_option("--problem", go.problem, "completion | regression");
  gen->add_option("--n", go.n, "rows (completion) or observations (regression)");
  gen->add_option("--m", go.m, "columns (completion)");
  gen->add_option("--q", go.q, "predictors (regression)");
  gen->add_option("--k", go.k, "responses (regression)");
  gen->add_option("--rank", go.rank, "ground-truth rank");
  gen->add_option("--os", go.os, "oversampling ratio: nnz = round(os (n+m-rank) rank)");
  gen->add_option("--fraction", go.fraction, "observed fraction of entries");
  gen->add_option("--noise-sigma", go.noise_sigma, "noise standard deviation (regression)");
  gen->add_option("--snr", go.snr, "signal-to-noise ratio; overrides --noise-sigma");
  gen->add_option("--split", go.split, "train fraction of the row split");
  gen->add_option("--seed", go.seed, "generation seed")->each([&go](const std::string&) {
    go.seed_given = true;
  });
  gen->add_option("--out", go.out, "output directory")->required();

  SolveOptions co;
  double lambda_complete = 0.0;
  std::string data_complete;
  auto* complete = app.add_subcommand("complete", "solve a matrix completion instance");
  complete->add_option("--data", data_complete, "instance directory (observed.mtx)")->required();
  complete->add_option("--lambda", lambda_complete, "penalty value")->required();
  add_solver_flags(complete, co);

  SolveOptions ro;
  double lambda_regress = 0.0;
  std::string data_regress;
  auto* regress = app.add_subcommand("regress", "solve a multivariate regression instance");
  regress->add_option("--data", data_regress, "instance directory (X_train.csv, Y_train.csv)")
      ->required();
  regress->add_option("--lambda", lambda_regress, "penalty value")->required();
  add_solver_flags(regress, ro);

  PathOptions po;
  auto* path = app.add_subcommand("path", "compute a regularization path");
  path->add_option("--problem", po.problem, "completion | regression");
  path->add_option("--data", po.data, "instance directory")->required();
  path->add_option("--lambda-max", po.lambda_max, "grid start (0 = data-dependent)");
  path->add_option("--lambda-min", po.lambda_min, "grid end");
  path->add_option("--gamma", po.gamma, "grid reduction factor");
  path->add_option("--predictor", po.predictor, "on | off")
      ->check(CLI::IsMember({"on", "off"}));
  add_solver_flags(path, po.solve);

  CheckOptions ko;
  auto* check = app.add_subcommand("check", "cross-check the solver against the dense reference");
  check->add_option("--problem", ko.problem, "completion | regression");
  check->add_option("--n", ko.n, "rows / observations");
  check->add_option("--m", ko.m, "columns (completion)");
  check->add_option("--q", ko.q, "predictors (regression)");
  check->add_option("--k", ko.k, "responses (regression)");
  check->add_option("--rank", ko.rank, "ground-truth rank");
  check->add_option("--fraction", ko.fraction, "observed fraction (completion)");
  check->add_option("--lambdas", ko.lambdas, "penalty values to test");
  check->add_option("--seed", ko.seed, "instance seed");
  check->add_option("--ridge", ko.ridge, "ridge coefficient");
  check->add_option("--out", ko.out, "optional report directory");
  check->add_option("--threads", ko.threads, "worker threads");

  try {
    args = expand_config(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }

  // CLI11 consumes arguments in reverse order.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_input;
  }

  try {
    if (*gen) return run_gen(go);
    if (*complete) return run_complete(data_complete, lambda_complete, co);
    if (*regress) return run_regress(data_regress, lambda_regress, ro);
    if (*path) return run_path(po);
    if (*check) return run_check(ko);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_input;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args));
}

}  // namespace tracenorm::cli
