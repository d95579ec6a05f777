#pragma once

#include <cstdint>
#include <functional>

#include "bifuse/prox.hpp"
#include "bifuse/types.hpp"

namespace bifuse {

/// Sample standard deviation of all n*k residual entries of Y - X Theta.
double estimate_sigma(const TaskDataset& data, const CoefficientMatrix& theta);

/// Cluster-extraction thresholds:
///   tau_c = 1/2 [ sigma sqrt(log(p)/n) + std(v_col) ]
///   tau_r = 1/2 [ sigma sqrt(log(p)/n) + std(v_row) ]
/// where v_col stacks all pairwise column distances of M and v_row all
/// pairwise row distances. An axis with fewer than 2 items gets tau = 0.
/// Returns (tau_r, tau_c).
std::pair<double, double> cluster_thresholds(const Matrix& M, double sigma,
                                             int n, int p);

/// Groups rows whose pairwise distance is <= tau_r and columns <= tau_c,
/// taking connected components of the threshold graph; canonical labels.
ClusterAssignment extract_clusters(const Matrix& M, double tau_r, double tau_c);

struct SolutionPathPoint {
  double penalty = 0.0;
  CoefficientMatrix theta;
  std::optional<CoefficientMatrix> gamma;
  ClusterAssignment assignment;
  int n_row_clusters = 0;
  int n_col_clusters = 0;
  bool converged = false;
  double objective = 0.0;
  double sigma_hat = 0.0;
  double tau_r = 0.0;
  double tau_c = 0.0;
};

struct SolutionPath {
  std::vector<SolutionPathPoint> points;
};

enum class PathPenalty {
  lambda2_f1,  // sweep lambda2 with formulation 1
  lambda3_f2,  // sweep lambda3 with formulation 2 (lambda2 fixed from hp)
};

/// Per-point step size for the formulation-1 sweeps; receives the current
/// penalty value. Useful because a good proximal-decomposition step shrinks
/// as lambda2 grows.
using GammaSchedule = std::function<double(double penalty)>;

/// Fits along a strictly increasing penalty grid with warm starts from the
/// previous point, extracting clusters at each fit. Formulation 2 clusters
/// on Gamma. Non-converged fits are recorded and the sweep continues.
SolutionPath solution_path(const TaskDataset& data, const EdgeWeights& edges,
                           Hyperparameters hp, const std::vector<double>& grid,
                           PathPenalty which, const ProxConfig& cfg = {},
                           int threads = 1,
                           const GammaSchedule& gamma_schedule = nullptr);

struct SplitSpec {
  double train_fraction = 0.70;
  double validation_fraction = 0.15;  // remainder is the test portion
  int folds = 0;                      // > 1 switches to k-fold CV
  uint64_t seed = 0;
};

/// Train/validation/test index partition, deterministic in split.seed.
struct DataSplit {
  std::vector<int> train, validation, test;
};
DataSplit make_split(int n, const SplitSpec& split);

TaskDataset subset_rows(const TaskDataset& data, const std::vector<int>& rows);

struct CvGrids {
  std::vector<double> lambda1;
  std::vector<double> lambda2;
  std::vector<double> lambda3;  // formulation 2 only
};

struct CvChoice {
  Hyperparameters hp;
  double stage1_rmse = 0.0;
  double stage2_rmse = 0.0;
};

/// Greedy two-stage tuning: stage 1 picks lambda1 by validation RMSE of the
/// plain Lasso; stage 2 fixes it and grid-searches lambda2 (formulation 1)
/// or the (lambda2, lambda3) grid scored by the RMSE of predictions from
/// Gamma (formulation 2). Ties break toward the smaller penalty.
CvChoice cross_validate(const TaskDataset& data, const EdgeWeights& edges,
                        const CvGrids& grids, const SplitSpec& split,
                        int formulation, const ProxConfig& cfg = {},
                        const Hyperparameters& base = {}, int threads = 1);

}  // namespace bifuse
