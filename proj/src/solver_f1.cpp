#include "bifuse/solver_f1.hpp"

#include <cmath>

#include "bifuse/objective.hpp"
#include "bifuse/solver_f2.hpp"

namespace bifuse {

FitResult fit_formulation1(const TaskDataset& data, const EdgeWeights& edges,
                           const Hyperparameters& hp, const ProxConfig& cfg,
                           const std::optional<CoefficientMatrix>& init) {
  if (hp.lambda1 < 0.0 || hp.lambda2 < 0.0) {
    throw input_error("fit_formulation1: penalties must be nonnegative");
  }
  if (!(hp.gamma > 0.0) || !std::isfinite(hp.gamma)) {
    throw input_error("fit_formulation1: gamma must be in (0, inf)");
  }
  validate_edges(edges.column_edges, data.k(), "column edges");
  validate_edges(edges.row_edges, data.p(), "row edges");

  const int p = data.p();
  const int k = data.k();

  CoefficientMatrix start;
  if (init) {
    if (init->rows() != p || init->cols() != k) {
      throw input_error("fit_formulation1: init must be p x k");
    }
    if (!init->allFinite()) throw input_error("fit_formulation1: non-finite init");
    start = *init;
  } else {
    start = pilot_lasso(data, hp.lambda1);
  }

  Matrix t1 = start, t2 = start, t3 = start;
  Matrix theta_hat = start;  // (t1 + t2 + t3) / 3

  RidgeProx ridge(data, hp.gamma);
  CobraSolver cobra_solver(edges, cfg);
  const double l1_threshold = hp.gamma * hp.lambda1;
  // prox of gamma * lambda2 * [Omega_col + Omega_row] under the 1/2-norm
  // convention equals the cobra target at nu = 2 * gamma * lambda2.
  const double cobra_nu = 2.0 * hp.gamma * hp.lambda2;

  FitResult result;
  int m = 0;
  for (; m < hp.max_iter; ++m) {
    Matrix p1 = ridge.apply(t1);
    if (!p1.allFinite()) {
      throw numerical_error("fit_formulation1: prox_ridge produced non-finite values");
    }
    Matrix p2 = soft_threshold(t2, l1_threshold);
    if (!p2.allFinite()) {
      throw numerical_error("fit_formulation1: prox_l1 produced non-finite values");
    }
    CobraResult cres = cobra_solver.solve(t3, cobra_nu);
    if (!cres.value.allFinite()) {
      throw numerical_error("fit_formulation1: cobra produced non-finite values");
    }
    result.inner_converged = result.inner_converged && cres.converged;
    Matrix& p3 = cres.value;

    Matrix p_bar = (p1 + p2 + p3) / 3.0;
    Matrix reflect = 2.0 * p_bar - theta_hat;
    t1 += reflect - p1;
    t2 += reflect - p2;
    t3 += reflect - p3;

    result.objective_trace.push_back(objective_f1(data, p_bar, edges, hp));
    const double change = (p_bar - theta_hat).norm() / (1.0 + theta_hat.norm());
    theta_hat = std::move(p_bar);
    if (change < hp.tol) {
      result.converged = true;
      ++m;
      break;
    }
  }

  result.theta = std::move(theta_hat);
  result.iterations = m;
  return result;
}

}  // namespace bifuse
