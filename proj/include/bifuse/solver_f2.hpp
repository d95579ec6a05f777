#pragma once

#include "bifuse/prox.hpp"
#include "bifuse/types.hpp"

namespace bifuse {

struct LassoOptions {
  double kkt_tol = 1e-6;
  int max_sweeps = 100000;
};

struct LassoResult {
  Vector beta;
  bool converged = false;
  int sweeps = 0;
  double kkt_residual = 0.0;
};

/// Minimizes ||y - X beta||^2 + lambda1 ||beta||_1 by cyclic coordinate
/// descent. Uses covariance updates when n > p and residual updates
/// otherwise; exits when the largest violated KKT condition drops below
/// opt.kkt_tol.
LassoResult lasso_cd(const Matrix& X, const Vector& y, double lambda1,
                     const LassoOptions& opt = {},
                     const Vector* warm_start = nullptr);

/// Same solver on a precomputed Gram system: gram = X^T X, xty = X^T y.
LassoResult lasso_cd_gram(const Matrix& gram, const Vector& xty, double lambda1,
                          const LassoOptions& opt = {},
                          const Vector* warm_start = nullptr);

/// Stacked system of the per-task subproblem with Gamma fixed:
/// X_tilde = (X; sqrt(lambda2) I_p), y_tilde = (y; sqrt(lambda2) gamma_col).
/// A Lasso solve on the pair minimizes
/// ||y - X b||^2 + lambda1 ||b||_1 + lambda2 ||b - gamma_col||^2.
std::pair<Matrix, Vector> augment_task(const Matrix& X, const Vector& y,
                                       const Vector& gamma_col, double lambda2);

/// Column-by-column Lasso fit, the pilot estimator of the weight graph and
/// the first step of the 2-step baseline.
CoefficientMatrix pilot_lasso(const TaskDataset& data, double lambda1,
                              const LassoOptions& opt = {}, int threads = 1);

/// Formulation 2: alternates the per-task augmented Lasso (Theta step) with
/// the convex bi-clustering prox at nu = lambda3/lambda2 (Gamma step),
/// stopping when the relative objective decrease falls below hp.tol.
FitResult fit_formulation2(const TaskDataset& data, const EdgeWeights& edges,
                           const Hyperparameters& hp, const ProxConfig& cfg = {},
                           const std::optional<CoefficientMatrix>& init_gamma = {},
                           int threads = 1);

}  // namespace bifuse
