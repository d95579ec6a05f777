#pragma once

#include "bifuse/types.hpp"

namespace bifuse {

struct ProxConfig {
  double inner_tol = 1e-6;
  int inner_max_iter = 10000;
  double ama_step = 0.0;  // <= 0 selects the step automatically
};

/// Entrywise soft-thresholding, the prox of threshold * ||.||_1.
Vector prox_l1(const Vector& b, double threshold);
Matrix soft_threshold(const Matrix& B, double threshold);

/// Prox of sigma * sum_s ||y_s - X_s a_s||^2 at the stacked point b.
/// Closed form per task: a_s = (sigma X_s^T X_s + I/2)^{-1} (sigma X_s^T y_s + b_s/2).
/// The factorization is built once and reused across apply() calls.
class RidgeProx {
 public:
  RidgeProx(const TaskDataset& data, double sigma);
  Matrix apply(const Matrix& B) const;

 private:
  std::vector<Eigen::LLT<Matrix>> llt_;  // one entry when the design is shared
  Matrix scaled_xty_;                    // sigma * X_s^T y_s, stacked as p x k
  bool shared_ = true;
  int p_ = 0;
  int k_ = 0;
};

/// One-shot form of RidgeProx on a stacked vector of length p*k
/// (column-major task blocks).
Vector prox_ridge(const Vector& b, const TaskDataset& data, double sigma);

struct ProxResult {
  Matrix value;
  bool converged = true;
  int iterations = 0;
};

/// Fusion prox along one axis:
///   argmin_A 1/2 ||A - M||_F^2 + nu * sum w_ij ||A_i - c_ij A_j||_2,
/// solved by projected dual ascent (AMA): one dual vector per edge,
/// gradient step, projection onto the ball of radius nu * w_ij. Stops when
/// the relative dual change drops below cfg.inner_tol.
ProxResult prox_fusion(const Matrix& M, const std::vector<WeightedEdge>& edges,
                       Axis axis, double nu, const ProxConfig& cfg = {});

struct CobraResult {
  Matrix value;
  bool converged = true;
  int sweeps = 0;
  /// ||Theta - Gamma||_F^2 + nu [Omega_W(Gamma) + Omega_Wtilde(Gamma^T)]
  /// at the running iterate, one entry per sweep.
  std::vector<double> objective_trace;
};

/// Convex bi-clustering step: minimizes over Gamma
///   ||Theta - Gamma||_F^2 + nu [ Omega_W(Gamma) + Omega_Wtilde(Gamma^T) ]
/// by Dykstra-style alternation of the row-fusion and column-fusion prox
/// operators with correction variables. Keeps dual warm starts across
/// solve() calls, so a solver can reuse one instance over its iterations.
class CobraSolver {
 public:
  CobraSolver(EdgeWeights edges, ProxConfig cfg);
  CobraResult solve(const Matrix& theta, double nu);

  const EdgeWeights& edges() const { return edges_; }

 private:
  EdgeWeights edges_;
  ProxConfig cfg_;
  Matrix dual_row_;  // warm start for the row-fusion prox
  Matrix dual_col_;  // warm start for the column-fusion prox
};

/// One-shot form of CobraSolver::solve.
CobraResult cobra(const Matrix& theta, const EdgeWeights& edges, double nu,
                  const ProxConfig& cfg = {});

namespace detail {

/// Fusion prox over the columns of B with an in/out dual warm start
/// (resized and zeroed when its shape does not match).
ProxResult fusion_prox_columns(const Matrix& B,
                               const std::vector<WeightedEdge>& edges, double nu,
                               const ProxConfig& cfg, Matrix* dual);

}  // namespace detail

}  // namespace bifuse
