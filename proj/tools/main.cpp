// bifuse: joint estimation and bi-clustering of multi-task regression
// coefficients. Subcommands: simulate, fit, path, cv, score, baseline2step.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

#include "bifuse/datagen.hpp"
#include "bifuse/io.hpp"
#include "bifuse/metrics.hpp"
#include "bifuse/model_selection.hpp"
#include "bifuse/objective.hpp"
#include "bifuse/parallel.hpp"
#include "bifuse/solver_f1.hpp"
#include "bifuse/solver_f2.hpp"
#include "bifuse/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bifuse;

namespace {

struct CommonOptions {
  std::string x_path, y_path;
  int formulation = 1;
  double lambda1 = 0.1;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double phi = 20.0;
  int kappa = 5;
  double gamma_step = 1.0;
  std::string mode = "bicluster";
  double tol = 1e-6;
  int max_iter = 0;  // 0 = per-formulation default
  int threads = 0;
  std::string out_dir = ".";
};

ClusterMode parse_mode(const std::string& mode) {
  if (mode == "bicluster") return ClusterMode::bicluster;
  if (mode == "columns-only") return ClusterMode::columns_only;
  if (mode == "rows-only") return ClusterMode::rows_only;
  throw input_error("unknown mode '" + mode + "'");
}

void add_common_fit_flags(CLI::App* cmd, CommonOptions& opt, bool with_lambdas) {
  cmd->add_option("--x", opt.x_path, "design matrix CSV")->required();
  cmd->add_option("--y", opt.y_path, "response matrix CSV")->required();
  cmd->add_option("--formulation", opt.formulation, "1 or 2")
      ->check(CLI::IsMember({1, 2}));
  if (with_lambdas) {
    cmd->add_option("--lambda1", opt.lambda1, "l1 penalty");
    cmd->add_option("--lambda2", opt.lambda2,
                    "fusion penalty (f1) / coupling penalty (f2)");
    cmd->add_option("--lambda3", opt.lambda3, "fusion penalty (f2 only)");
  }
  cmd->add_option("--phi", opt.phi, "Gaussian kernel scale (default 20)");
  cmd->add_option("--kappa", opt.kappa, "neighbor count (default 5)");
  cmd->add_option("--gamma", opt.gamma_step,
                  "proximal-decomposition step (default 1.0)");
  cmd->add_option("--mode", opt.mode, "bicluster | columns-only | rows-only")
      ->check(CLI::IsMember({"bicluster", "columns-only", "rows-only"}));
  cmd->add_option("--tol", opt.tol, "convergence tolerance");
  cmd->add_option("--max-iter", opt.max_iter, "iteration cap");
  cmd->add_option("--threads", opt.threads,
                  "worker threads (0 = BIFUSE_THREADS or hardware)");
  cmd->add_option("--out-dir", opt.out_dir, "output directory");
}

TaskDataset load_dataset(const CommonOptions& opt) {
  Matrix X = read_csv_matrix(opt.x_path);
  Matrix Y = read_csv_matrix(opt.y_path);
  return TaskDataset(std::move(X), std::move(Y));
}

Hyperparameters to_hyperparameters(const CommonOptions& opt) {
  Hyperparameters hp;
  hp.lambda1 = opt.lambda1;
  hp.lambda2 = opt.lambda2;
  hp.lambda3 = opt.lambda3;
  hp.phi = opt.phi;
  hp.kappa = opt.kappa;
  hp.gamma = opt.gamma_step;
  hp.tol = opt.tol;
  hp.max_iter = opt.max_iter > 0 ? opt.max_iter : (opt.formulation == 1 ? 2000 : 200);
  return hp;
}

std::vector<int> singleton_labels(int m) {
  std::vector<int> labels(m);
  for (int i = 0; i < m; ++i) labels[i] = i;
  return labels;
}

struct Extraction {
  ClusterAssignment assignment;
  double sigma_hat = 0.0;
  double tau_r = 0.0;
  double tau_c = 0.0;
};

/// Thresholds from the residual scale of theta, clusters from
/// cluster_matrix (theta for formulation 1, gamma for formulation 2).
/// Axes disabled by `mode` stay singletons.
Extraction extract(const TaskDataset& data, const CoefficientMatrix& theta,
                   const Matrix& cluster_matrix, ClusterMode mode) {
  Extraction out;
  out.sigma_hat = estimate_sigma(data, theta);
  auto [tau_r, tau_c] =
      cluster_thresholds(cluster_matrix, out.sigma_hat, data.n(), data.p());
  if (mode != ClusterMode::columns_only) out.tau_r = tau_r;
  if (mode != ClusterMode::rows_only) out.tau_c = tau_c;
  out.assignment = extract_clusters(cluster_matrix, out.tau_r, out.tau_c);
  if (mode == ClusterMode::columns_only) {
    out.assignment.row_labels = singleton_labels(data.p());
  } else if (mode == ClusterMode::rows_only) {
    out.assignment.col_labels = singleton_labels(data.k());
  }
  return out;
}

json fit_report(const CommonOptions& opt, const Hyperparameters& hp,
                const FitResult& fit, const Extraction& ex) {
  return json{{"formulation", opt.formulation},
              {"mode", opt.mode},
              {"lambda1", hp.lambda1},
              {"lambda2", hp.lambda2},
              {"lambda3", hp.lambda3},
              {"phi", hp.phi},
              {"kappa", hp.kappa},
              {"gamma", hp.gamma},
              {"tol", hp.tol},
              {"max_iter", hp.max_iter},
              {"iterations", fit.iterations},
              {"converged", fit.converged},
              {"inner_converged", fit.inner_converged},
              {"objective", fit.objective_trace.empty() ? 0.0
                                                        : fit.objective_trace.back()},
              {"objective_trace", fit.objective_trace},
              {"sigma_hat", ex.sigma_hat},
              {"tau_r", ex.tau_r},
              {"tau_c", ex.tau_c},
              {"n_row_clusters", count_clusters(ex.assignment.row_labels)},
              {"n_col_clusters", count_clusters(ex.assignment.col_labels)}};
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::optional<uint64_t>& seed_override) {
  const json cfg = read_json_file(config_path);
  GeneratorSpec spec;
  try {
    spec.n = cfg.at("n").get<int>();
    spec.p = cfg.at("p").get<int>();
    spec.k = cfg.at("k").get<int>();
    spec.row_partition = cfg.at("row_partition").get<std::vector<int>>();
    spec.col_partition = cfg.at("col_partition").get<std::vector<int>>();
    spec.zero_block_fraction = cfg.value("zero_block_fraction", 0.5);
    if (cfg.contains("mu_support")) {
      spec.mu_support = cfg.at("mu_support").get<std::vector<double>>();
    }
    spec.sigma_eps = cfg.value("sigma_eps", 0.25);
    spec.sigma_noise = cfg.value("sigma_noise", 1.5);
    spec.seed = cfg.value("seed", 0ULL);
  } catch (const json::exception& e) {
    throw input_error(config_path + ": " + e.what());
  }
  if (seed_override) spec.seed = *seed_override;
  validate_spec(spec);

  auto [theta_star, truth] = checkerboard_theta(spec);
  TaskDataset data = simulate_dataset(theta_star, spec.n, spec.sigma_noise, spec.seed);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_csv_matrix((dir / "X.csv").string(), data.shared_design());
  write_csv_matrix((dir / "Y.csv").string(), data.responses());
  write_csv_matrix((dir / "theta_star.csv").string(), theta_star);
  json truth_json = assignment_to_json(truth);
  truth_json["seed"] = spec.seed;
  truth_json["sigma_noise"] = spec.sigma_noise;
  write_json_atomic((dir / "truth.json").string(), truth_json);
  return 0;
}

int cmd_fit(const CommonOptions& opt) {
  const TaskDataset data = load_dataset(opt);
  const Hyperparameters hp = to_hyperparameters(opt);
  const ClusterMode mode = parse_mode(opt.mode);
  const int threads = resolve_threads(opt.threads);

  const CoefficientMatrix pilot = pilot_lasso(data, hp.lambda1, {}, threads);
  const EdgeWeights edges = pilot_weights(pilot, hp.kappa, hp.phi, data.n(), mode);

  FitResult fit;
  if (opt.formulation == 1) {
    fit = fit_formulation1(data, edges, hp, {}, pilot);
  } else {
    fit = fit_formulation2(data, edges, hp, {}, pilot, threads);
  }

  const Matrix& cluster_matrix = fit.gamma ? *fit.gamma : fit.theta;
  const Extraction ex = extract(data, fit.theta, cluster_matrix, mode);

  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  write_csv_matrix((dir / "theta.csv").string(), fit.theta);
  if (fit.gamma) write_csv_matrix((dir / "gamma.csv").string(), *fit.gamma);
  write_json_atomic((dir / "clusters.json").string(),
                    assignment_to_json(ex.assignment));
  write_json_atomic((dir / "report.json").string(), fit_report(opt, hp, fit, ex));
  return 0;
}

int cmd_path(const CommonOptions& opt, const std::vector<double>& grid) {
  const TaskDataset data = load_dataset(opt);
  Hyperparameters hp = to_hyperparameters(opt);
  const ClusterMode mode = parse_mode(opt.mode);
  const int threads = resolve_threads(opt.threads);

  const CoefficientMatrix pilot = pilot_lasso(data, hp.lambda1, {}, threads);
  const EdgeWeights edges = pilot_weights(pilot, hp.kappa, hp.phi, data.n(), mode);
  const PathPenalty which = opt.formulation == 1 ? PathPenalty::lambda2_f1
                                                 : PathPenalty::lambda3_f2;

  SolutionPath path = solution_path(data, edges, hp, grid, which, {}, threads);

  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  json points = json::array();
  char name[32];
  for (size_t i = 0; i < path.points.size(); ++i) {
    SolutionPathPoint& pt = path.points[i];
    // Axes disabled by the mode stay singletons, as in cmd_fit.
    if (mode == ClusterMode::columns_only) {
      pt.assignment.row_labels = singleton_labels(data.p());
      pt.n_row_clusters = data.p();
      pt.tau_r = 0.0;
    } else if (mode == ClusterMode::rows_only) {
      pt.assignment.col_labels = singleton_labels(data.k());
      pt.n_col_clusters = data.k();
      pt.tau_c = 0.0;
    }
    std::snprintf(name, sizeof(name), "theta_%03zu.csv", i);
    write_csv_matrix((dir / name).string(), pt.theta);
    json entry{{"penalty", pt.penalty},
               {"n_row_clusters", pt.n_row_clusters},
               {"n_col_clusters", pt.n_col_clusters},
               {"converged", pt.converged},
               {"objective", pt.objective},
               {"sigma_hat", pt.sigma_hat},
               {"tau_r", pt.tau_r},
               {"tau_c", pt.tau_c},
               {"theta_file", name},
               {"clusters", assignment_to_json(pt.assignment)}};
    if (pt.gamma) {
      std::snprintf(name, sizeof(name), "gamma_%03zu.csv", i);
      write_csv_matrix((dir / name).string(), *pt.gamma);
      entry["gamma_file"] = name;
    }
    points.push_back(std::move(entry));
  }
  write_json_atomic((dir / "path.json").string(),
                    json{{"formulation", opt.formulation},
                         {"penalty_name", opt.formulation == 1 ? "lambda2" : "lambda3"},
                         {"mode", opt.mode},
                         {"lambda1", hp.lambda1},
                         {"lambda2", hp.lambda2},
                         {"points", points}});
  return 0;
}

int cmd_cv(const CommonOptions& opt, const CvGrids& grids, const SplitSpec& split,
           const std::string& out_file) {
  const TaskDataset data = load_dataset(opt);
  Hyperparameters base = to_hyperparameters(opt);
  const ClusterMode mode = parse_mode(opt.mode);
  const int threads = resolve_threads(opt.threads);
  if (grids.lambda1.empty()) throw input_error("cv: empty lambda1 grid");

  // The weight graph needs a pilot estimate before lambda1 is tuned; the
  // mid-grid value stands in, and the clustering is insensitive to it.
  const double weights_lambda1 = grids.lambda1[grids.lambda1.size() / 2];
  const CoefficientMatrix pilot = pilot_lasso(data, weights_lambda1, {}, threads);
  const EdgeWeights edges = pilot_weights(pilot, base.kappa, base.phi, data.n(), mode);

  const CvChoice choice = cross_validate(data, edges, grids, split,
                                         opt.formulation, {}, base, threads);

  json out{{"formulation", opt.formulation},
           {"mode", opt.mode},
           {"lambda1", choice.hp.lambda1},
           {"lambda2", choice.hp.lambda2},
           {"lambda3", choice.hp.lambda3},
           {"phi", choice.hp.phi},
           {"kappa", choice.hp.kappa},
           {"gamma", choice.hp.gamma},
           {"stage1_rmse", choice.stage1_rmse},
           {"stage2_rmse", choice.stage2_rmse},
           {"weights_lambda1", weights_lambda1},
           {"seed", split.seed},
           {"folds", split.folds}};
  fs::create_directories(fs::path(out_file).parent_path().empty()
                             ? "."
                             : fs::path(out_file).parent_path().string());
  write_json_atomic(out_file, out);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_score(const std::string& pred_path, const std::string& truth_path,
              const std::string& theta_path, const std::string& theta_star_path,
              const std::string& x_path, const std::string& y_path,
              const std::string& out_file) {
  const ClusterAssignment pred = assignment_from_json(read_json_file(pred_path));
  const ClusterAssignment truth = assignment_from_json(read_json_file(truth_path));
  if (pred.row_labels.size() != truth.row_labels.size() ||
      pred.col_labels.size() != truth.col_labels.size()) {
    throw input_error("score: predicted and true labelings differ in size");
  }

  auto scores = [](const std::vector<int>& a, const std::vector<int>& b) {
    return json{{"ari", adjusted_rand(a, b)},
                {"f1", f1_score(a, b)},
                {"jaccard", jaccard_index(a, b)}};
  };
  json out{{"row", scores(pred.row_labels, truth.row_labels)},
           {"column", scores(pred.col_labels, truth.col_labels)},
           {"bicluster", scores(bicluster_labels(pred), bicluster_labels(truth))}};

  if (!theta_path.empty() && !theta_star_path.empty()) {
    const Matrix theta = read_csv_matrix(theta_path);
    const Matrix theta_star = read_csv_matrix(theta_star_path);
    out["recovery_accuracy"] = recovery_accuracy(theta, theta_star);
  }
  if (!theta_path.empty() && !x_path.empty() && !y_path.empty()) {
    const Matrix theta = read_csv_matrix(theta_path);
    const Matrix X = read_csv_matrix(x_path);
    const Matrix Y = read_csv_matrix(y_path);
    if (X.cols() != theta.rows() || X.rows() != Y.rows() ||
        theta.cols() != Y.cols()) {
      throw input_error("score: X, Y and theta dimensions disagree");
    }
    out["rmse"] = rmse(X * theta, Y);
  }

  write_json_atomic(out_file, out);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_baseline2step(const CommonOptions& opt, double nu) {
  const TaskDataset data = load_dataset(opt);
  const Hyperparameters hp = to_hyperparameters(opt);
  const ClusterMode mode = parse_mode(opt.mode);
  const int threads = resolve_threads(opt.threads);

  // Step 1: Lasso estimate. Step 2: convex bi-clustering of that estimate.
  const CoefficientMatrix theta = pilot_lasso(data, hp.lambda1, {}, threads);
  const EdgeWeights edges = pilot_weights(theta, hp.kappa, hp.phi, data.n(), mode);
  ProxConfig cfg;
  CobraResult clustered = cobra(theta, edges, nu, cfg);

  const Extraction ex = extract(data, theta, clustered.value, mode);

  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  write_csv_matrix((dir / "theta.csv").string(), theta);
  write_csv_matrix((dir / "gamma.csv").string(), clustered.value);
  write_json_atomic((dir / "clusters.json").string(),
                    assignment_to_json(ex.assignment));
  write_json_atomic(
      (dir / "report.json").string(),
      json{{"command", "baseline2step"},
           {"mode", opt.mode},
           {"lambda1", hp.lambda1},
           {"nu", nu},
           {"phi", hp.phi},
           {"kappa", hp.kappa},
           {"converged", clustered.converged},
           {"sweeps", clustered.sweeps},
           {"sigma_hat", ex.sigma_hat},
           {"tau_r", ex.tau_r},
           {"tau_c", ex.tau_c},
           {"n_row_clusters", count_clusters(ex.assignment.row_labels)},
           {"n_col_clusters", count_clusters(ex.assignment.col_labels)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint multi-task regression and bi-clustering"};
  app.require_subcommand(1);

  // simulate
  std::string config_path, sim_out_dir = ".";
  std::optional<uint64_t> sim_seed;
  CLI::App* simulate = app.add_subcommand("simulate", "generate a synthetic dataset");
  simulate->add_option("--config", config_path, "generator config JSON")->required();
  simulate->add_option("--out-dir", sim_out_dir, "output directory");
  simulate->add_option("--seed", sim_seed, "override the config seed");

  // fit
  CommonOptions fit_opt;
  CLI::App* fit = app.add_subcommand("fit", "fit one model and extract clusters");
  add_common_fit_flags(fit, fit_opt, true);

  // path
  CommonOptions path_opt;
  std::vector<double> grid;
  CLI::App* path = app.add_subcommand("path", "sweep a penalty grid");
  add_common_fit_flags(path, path_opt, true);
  path->add_option("--grid", grid, "increasing penalty values")
      ->required()
      ->delimiter(',');

  // cv
  CommonOptions cv_opt;
  CvGrids grids;
  SplitSpec split;
  std::string cv_out = "cv.json";
  CLI::App* cv = app.add_subcommand("cv", "greedy hyperparameter tuning");
  add_common_fit_flags(cv, cv_opt, false);
  cv->add_option("--lambda1-grid", grids.lambda1, "stage-1 grid")
      ->required()
      ->delimiter(',');
  cv->add_option("--lambda2-grid", grids.lambda2, "stage-2 grid")
      ->required()
      ->delimiter(',');
  cv->add_option("--lambda3-grid", grids.lambda3, "stage-2 grid (formulation 2)")
      ->delimiter(',');
  cv->add_option("--train-frac", split.train_fraction, "training fraction");
  cv->add_option("--val-frac", split.validation_fraction, "validation fraction");
  cv->add_option("--folds", split.folds, "k-fold CV instead of holdout");
  cv->add_option("--seed", split.seed, "split seed");
  cv->add_option("--out", cv_out, "output JSON path");

  // score
  std::string pred_path, truth_path, theta_path, theta_star_path;
  std::string score_x, score_y, score_out = "scores.json";
  CLI::App* score = app.add_subcommand("score", "compare clusterings and estimates");
  score->add_option("--pred", pred_path, "predicted clusters.json")->required();
  score->add_option("--truth", truth_path, "true clusters/truth.json")->required();
  score->add_option("--theta", theta_path, "estimated coefficients CSV");
  score->add_option("--theta-star", theta_star_path, "true coefficients CSV");
  score->add_option("--x", score_x, "design CSV for prediction RMSE");
  score->add_option("--y", score_y, "response CSV for prediction RMSE");
  score->add_option("--out", score_out, "output JSON path");

  // baseline2step
  CommonOptions base_opt;
  double nu = 1.0;
  CLI::App* baseline =
      app.add_subcommand("baseline2step", "lasso then convex bi-clustering");
  add_common_fit_flags(baseline, base_opt, true);
  baseline->add_option("--nu", nu, "bi-clustering penalty of step 2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, sim_out_dir, sim_seed);
    if (fit->parsed()) return cmd_fit(fit_opt);
    if (path->parsed()) return cmd_path(path_opt, grid);
    if (cv->parsed()) return cmd_cv(cv_opt, grids, split, cv_out);
    if (score->parsed()) {
      return cmd_score(pred_path, truth_path, theta_path, theta_star_path,
                       score_x, score_y, score_out);
    }
    if (baseline->parsed()) return cmd_baseline2step(base_opt, nu);
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
