#include "bifuse/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bifuse/metrics.hpp"
#include "bifuse/objective.hpp"
#include "bifuse/parallel.hpp"
#include "bifuse/rng.hpp"
#include "bifuse/solver_f1.hpp"
#include "bifuse/solver_f2.hpp"

namespace bifuse {

namespace {

double sample_std(const std::vector<double>& v) {
  const size_t m = v.size();
  if (m < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / m;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (m - 1));
}

std::vector<double> pairwise_distances(const Matrix& M, Axis axis) {
  const int m = axis == Axis::columns ? static_cast<int>(M.cols())
                                      : static_cast<int>(M.rows());
  std::vector<double> v;
  v.reserve(static_cast<size_t>(m) * (m - 1) / 2);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      v.push_back(axis == Axis::columns ? (M.col(i) - M.col(j)).norm()
                                        : (M.row(i) - M.row(j)).norm());
    }
  }
  return v;
}

class UnionFind {
 public:
  explicit UnionFind(int m) : parent_(m) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void merge(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

std::vector<int> threshold_components(const Matrix& M, double tau, Axis axis) {
  const int m = axis == Axis::columns ? static_cast<int>(M.cols())
                                      : static_cast<int>(M.rows());
  UnionFind uf(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double d = axis == Axis::columns ? (M.col(i) - M.col(j)).norm()
                                             : (M.row(i) - M.row(j)).norm();
      if (d <= tau) uf.merge(i, j);
    }
  }
  std::vector<int> roots(m);
  for (int i = 0; i < m; ++i) roots[i] = uf.find(i);
  return canonicalize_labels(roots);
}

Matrix residuals(const TaskDataset& data, const CoefficientMatrix& theta) {
  if (theta.rows() != data.p() || theta.cols() != data.k()) {
    throw input_error("theta must be p x k");
  }
  if (data.has_shared_design()) {
    return data.responses() - data.shared_design() * theta;
  }
  Matrix r(data.n(), data.k());
  for (int s = 0; s < data.k(); ++s) {
    r.col(s) = data.responses().col(s) - data.design(s) * theta.col(s);
  }
  return r;
}

Matrix predictions(const TaskDataset& data, const CoefficientMatrix& coef) {
  return data.responses() - residuals(data, coef);
}

std::vector<int> shuffled_indices(int n, uint64_t seed) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng = Rng::substream(seed, /*stream=*/0x5917ULL);
  for (int i = n - 1; i > 0; --i) {
    std::swap(idx[i], idx[rng.uniform_int(i + 1)]);
  }
  return idx;
}

}  // namespace

double estimate_sigma(const TaskDataset& data, const CoefficientMatrix& theta) {
  const Eigen::Index count = static_cast<Eigen::Index>(data.n()) * data.k();
  if (count < 2) {
    throw input_error("estimate_sigma: needs at least 2 residual entries");
  }
  const Matrix r = residuals(data, theta);
  const double mean = r.sum() / count;
  return std::sqrt((r.array() - mean).square().sum() / (count - 1));
}

std::pair<double, double> cluster_thresholds(const Matrix& M, double sigma,
                                             int n, int p) {
  if (sigma < 0.0 || !std::isfinite(sigma)) {
    throw input_error("cluster_thresholds: sigma must be a nonnegative real");
  }
  if (n < 1 || p < 1) throw input_error("cluster_thresholds: n, p must be >= 1");
  const double base =
      sigma * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
  double tau_r = 0.0, tau_c = 0.0;
  if (M.rows() >= 2) {
    tau_r = 0.5 * (base + sample_std(pairwise_distances(M, Axis::rows)));
  }
  if (M.cols() >= 2) {
    tau_c = 0.5 * (base + sample_std(pairwise_distances(M, Axis::columns)));
  }
  return {tau_r, tau_c};
}

ClusterAssignment extract_clusters(const Matrix& M, double tau_r, double tau_c) {
  ClusterAssignment out;
  out.row_labels = threshold_components(M, tau_r, Axis::rows);
  out.col_labels = threshold_components(M, tau_c, Axis::columns);
  return out;
}

SolutionPath solution_path(const TaskDataset& data, const EdgeWeights& edges,
                           Hyperparameters hp, const std::vector<double>& grid,
                           PathPenalty which, const ProxConfig& cfg, int threads,
                           const GammaSchedule& gamma_schedule) {
  if (grid.empty()) throw input_error("solution_path: empty grid");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw input_error("solution_path: grid must be strictly increasing");
    }
  }

  SolutionPath path;
  std::optional<CoefficientMatrix> warm;
  for (double value : grid) {
    FitResult fit;
    if (which == PathPenalty::lambda2_f1) {
      hp.lambda2 = value;
      if (gamma_schedule) hp.gamma = gamma_schedule(value);
      fit = fit_formulation1(data, edges, hp, cfg, warm);
      warm = fit.theta;
    } else {
      hp.lambda3 = value;
      fit = fit_formulation2(data, edges, hp, cfg, warm, threads);
      warm = fit.gamma;
    }

    SolutionPathPoint point;
    point.penalty = value;
    point.converged = fit.converged;
    point.objective = fit.objective_trace.empty() ? 0.0 : fit.objective_trace.back();
    point.sigma_hat = estimate_sigma(data, fit.theta);
    const Matrix& cluster_matrix = fit.gamma ? *fit.gamma : fit.theta;
    std::tie(point.tau_r, point.tau_c) =
        cluster_thresholds(cluster_matrix, point.sigma_hat, data.n(), data.p());
    point.assignment = extract_clusters(cluster_matrix, point.tau_r, point.tau_c);
    point.n_row_clusters = count_clusters(point.assignment.row_labels);
    point.n_col_clusters = count_clusters(point.assignment.col_labels);
    point.theta = std::move(fit.theta);
    point.gamma = std::move(fit.gamma);
    path.points.push_back(std::move(point));
  }
  return path;
}

DataSplit make_split(int n, const SplitSpec& split) {
  if (split.train_fraction <= 0.0 || split.validation_fraction <= 0.0 ||
      split.train_fraction + split.validation_fraction > 1.0) {
    throw input_error("make_split: fractions must be positive with sum <= 1");
  }
  const std::vector<int> idx = shuffled_indices(n, split.seed);
  int n_train = static_cast<int>(std::round(split.train_fraction * n));
  int n_val = static_cast<int>(std::round(split.validation_fraction * n));
  n_train = std::max(1, std::min(n_train, n - 1));
  n_val = std::max(1, std::min(n_val, n - n_train));
  DataSplit out;
  out.train.assign(idx.begin(), idx.begin() + n_train);
  out.validation.assign(idx.begin() + n_train, idx.begin() + n_train + n_val);
  out.test.assign(idx.begin() + n_train + n_val, idx.end());
  return out;
}

TaskDataset subset_rows(const TaskDataset& data, const std::vector<int>& rows) {
  if (rows.empty()) throw input_error("subset_rows: empty index set");
  const int m = static_cast<int>(rows.size());
  Matrix Y(m, data.k());
  for (int r = 0; r < m; ++r) Y.row(r) = data.responses().row(rows[r]);
  if (data.has_shared_design()) {
    Matrix X(m, data.p());
    for (int r = 0; r < m; ++r) X.row(r) = data.shared_design().row(rows[r]);
    return TaskDataset(std::move(X), std::move(Y));
  }
  std::vector<Matrix> designs;
  designs.reserve(data.k());
  for (int s = 0; s < data.k(); ++s) {
    Matrix X(m, data.p());
    for (int r = 0; r < m; ++r) X.row(r) = data.design(s).row(rows[r]);
    designs.push_back(std::move(X));
  }
  return TaskDataset(std::move(designs), std::move(Y));
}

namespace {

struct FoldSet {
  std::vector<std::pair<TaskDataset, TaskDataset>> train_val;
};

FoldSet build_folds(const TaskDataset& data, const SplitSpec& split) {
  FoldSet out;
  if (split.folds > 1) {
    if (split.folds > data.n()) {
      throw input_error("cross_validate: more folds than samples");
    }
    const std::vector<int> idx = shuffled_indices(data.n(), split.seed);
    for (int f = 0; f < split.folds; ++f) {
      std::vector<int> val, train;
      for (int i = 0; i < data.n(); ++i) {
        (i % split.folds == f ? val : train).push_back(idx[i]);
      }
      if (val.empty() || train.empty()) {
        throw input_error("cross_validate: a fold has no samples");
      }
      out.train_val.emplace_back(subset_rows(data, train), subset_rows(data, val));
    }
  } else {
    const DataSplit s = make_split(data.n(), split);
    out.train_val.emplace_back(subset_rows(data, s.train),
                               subset_rows(data, s.validation));
  }
  return out;
}

std::vector<double> ascending(std::vector<double> grid) {
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace

CvChoice cross_validate(const TaskDataset& data, const EdgeWeights& edges,
                        const CvGrids& grids, const SplitSpec& split,
                        int formulation, const ProxConfig& cfg,
                        const Hyperparameters& base, int threads) {
  if (formulation != 1 && formulation != 2) {
    throw input_error("cross_validate: formulation must be 1 or 2");
  }
  if (grids.lambda1.empty() || grids.lambda2.empty() ||
      (formulation == 2 && grids.lambda3.empty())) {
    throw input_error("cross_validate: empty grid");
  }

  const FoldSet folds = build_folds(data, split);
  const int n_folds = static_cast<int>(folds.train_val.size());

  // Stage 1: lambda1 by validation RMSE of the plain Lasso.
  const std::vector<double> grid1 = ascending(grids.lambda1);
  double best1 = 0.0, best1_rmse = std::numeric_limits<double>::infinity();
  for (double l1 : grid1) {
    double total = 0.0;
    for (const auto& [train, val] : folds.train_val) {
      const CoefficientMatrix pilot = pilot_lasso(train, l1, {}, threads);
      total += rmse(predictions(val, pilot), val.responses());
    }
    const double score = total / n_folds;
    if (score < best1_rmse) {
      best1_rmse = score;
      best1 = l1;
    }
  }

  Hyperparameters hp = base;
  hp.lambda1 = best1;

  // Stage 2: the fusion penalties, warm-started along the grid per fold.
  struct Candidate {
    double l2, l3;
  };
  std::vector<Candidate> candidates;
  if (formulation == 1) {
    for (double l2 : ascending(grids.lambda2)) candidates.push_back({l2, 0.0});
  } else {
    for (double l2 : ascending(grids.lambda2)) {
      for (double l3 : ascending(grids.lambda3)) candidates.push_back({l2, l3});
    }
  }

  std::vector<double> scores(candidates.size(), 0.0);
  for (int f = 0; f < n_folds; ++f) {
    const auto& [train, val] = folds.train_val[f];
    std::optional<CoefficientMatrix> warm;
    for (size_t c = 0; c < candidates.size(); ++c) {
      Hyperparameters trial = hp;
      trial.lambda2 = candidates[c].l2;
      trial.lambda3 = candidates[c].l3;
      if (formulation == 1) {
        FitResult fit = fit_formulation1(train, edges, trial, cfg, warm);
        warm = fit.theta;
        scores[c] += rmse(predictions(val, fit.theta), val.responses());
      } else {
        FitResult fit = fit_formulation2(train, edges, trial, cfg, warm, threads);
        warm = fit.gamma;
        // Predictions from Gamma: it carries the clustering structure.
        scores[c] += rmse(predictions(val, *fit.gamma), val.responses());
      }
    }
  }

  size_t best_c = 0;
  for (size_t c = 1; c < candidates.size(); ++c) {
    if (scores[c] < scores[best_c]) best_c = c;
  }

  CvChoice choice;
  hp.lambda2 = candidates[best_c].l2;
  hp.lambda3 = candidates[best_c].l3;
  choice.hp = hp;
  choice.stage1_rmse = best1_rmse;
  choice.stage2_rmse = scores[best_c] / n_folds;
  return choice;
}

}  // namespace bifuse
