#include "bifuse/solver_f2.hpp"

#include <cmath>

#include "bifuse/objective.hpp"
#include "bifuse/parallel.hpp"

namespace bifuse {

namespace {

double soft(double v, double t) {
  const double mag = std::abs(v) - t;
  return mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
}

/// KKT residual of ||y - X b||^2 + lambda1 ||b||_1 given q = X^T (y - X b):
/// 2 q_j = lambda1 sign(b_j) on the support, |2 q_j| <= lambda1 off it.
double kkt_residual(const Vector& beta, const Vector& q, double lambda1) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double g = 2.0 * q(j);
    double viol;
    if (beta(j) > 0.0) {
      viol = std::abs(g - lambda1);
    } else if (beta(j) < 0.0) {
      viol = std::abs(g + lambda1);
    } else {
      viol = std::max(0.0, std::abs(g) - lambda1);
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

}  // namespace

LassoResult lasso_cd_gram(const Matrix& gram, const Vector& xty, double lambda1,
                          const LassoOptions& opt, const Vector* warm_start) {
  const Eigen::Index p = gram.rows();
  if (gram.cols() != p || xty.size() != p) {
    throw input_error("lasso_cd_gram: gram must be p x p and xty length p");
  }
  if (lambda1 < 0.0 || !std::isfinite(lambda1)) {
    throw input_error("lasso_cd_gram: lambda1 must be >= 0");
  }

  Vector beta = warm_start && warm_start->size() == p ? *warm_start
                                                      : Vector::Zero(p);
  Vector q = xty - gram * beta;  // X^T (y - X beta)
  const double half_l1 = 0.5 * lambda1;

  LassoResult result;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double gjj = gram(j, j);
      if (gjj <= 0.0) continue;  // zero column, KKT holds with beta_j = 0
      const double old = beta(j);
      const double next = soft(q(j) + gjj * old, half_l1) / gjj;
      if (next != old) {
        q -= gram.col(j) * (next - old);
        beta(j) = next;
      }
    }
    result.sweeps = sweep + 1;
    result.kkt_residual = kkt_residual(beta, q, lambda1);
    if (result.kkt_residual < opt.kkt_tol) {
      result.converged = true;
      break;
    }
  }
  result.beta = std::move(beta);
  return result;
}

LassoResult lasso_cd(const Matrix& X, const Vector& y, double lambda1,
                     const LassoOptions& opt, const Vector* warm_start) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) throw input_error("lasso_cd: X and y row counts differ");
  if (!X.allFinite() || !y.allFinite()) {
    throw input_error("lasso_cd: non-finite input");
  }
  if (lambda1 < 0.0 || !std::isfinite(lambda1)) {
    throw input_error("lasso_cd: lambda1 must be >= 0");
  }

  if (n > p) {
    return lasso_cd_gram(X.transpose() * X, X.transpose() * y, lambda1, opt,
                         warm_start);
  }

  // Naive residual updates; cheaper than the Gram matrix when p >= n.
  Vector beta = warm_start && warm_start->size() == p ? *warm_start
                                                      : Vector::Zero(p);
  Vector col_sq(p);
  for (Eigen::Index j = 0; j < p; ++j) col_sq(j) = X.col(j).squaredNorm();
  Vector r = y - X * beta;
  const double half_l1 = 0.5 * lambda1;

  LassoResult result;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_sq(j) <= 0.0) continue;
      const double old = beta(j);
      const double next = soft(X.col(j).dot(r) + col_sq(j) * old, half_l1) / col_sq(j);
      if (next != old) {
        r -= X.col(j) * (next - old);
        beta(j) = next;
      }
    }
    result.sweeps = sweep + 1;
    result.kkt_residual = kkt_residual(beta, X.transpose() * r, lambda1);
    if (result.kkt_residual < opt.kkt_tol) {
      result.converged = true;
      break;
    }
  }
  result.beta = std::move(beta);
  return result;
}

std::pair<Matrix, Vector> augment_task(const Matrix& X, const Vector& y,
                                       const Vector& gamma_col, double lambda2) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) throw input_error("augment_task: X and y row counts differ");
  if (gamma_col.size() != p) {
    throw input_error("augment_task: gamma column must have length p");
  }
  if (!(lambda2 > 0.0)) throw input_error("augment_task: lambda2 must be positive");

  const double root = std::sqrt(lambda2);
  Matrix Xt(n + p, p);
  Xt.topRows(n) = X;
  Xt.bottomRows(p) = root * Matrix::Identity(p, p);
  Vector yt(n + p);
  yt.head(n) = y;
  yt.tail(p) = root * gamma_col;
  return {std::move(Xt), std::move(yt)};
}

CoefficientMatrix pilot_lasso(const TaskDataset& data, double lambda1,
                              const LassoOptions& opt, int threads) {
  CoefficientMatrix theta(data.p(), data.k());
  if (data.has_shared_design()) {
    const Matrix& X = data.shared_design();
    const Matrix gram = X.transpose() * X;
    parallel_for(data.k(), threads, [&](int s) {
      theta.col(s) =
          lasso_cd_gram(gram, X.transpose() * data.responses().col(s), lambda1, opt)
              .beta;
    });
  } else {
    parallel_for(data.k(), threads, [&](int s) {
      theta.col(s) =
          lasso_cd(data.design(s), data.responses().col(s), lambda1, opt).beta;
    });
  }
  return theta;
}

FitResult fit_formulation2(const TaskDataset& data, const EdgeWeights& edges,
                           const Hyperparameters& hp, const ProxConfig& cfg,
                           const std::optional<CoefficientMatrix>& init_gamma,
                           int threads) {
  if (!(hp.lambda2 > 0.0)) {
    throw input_error(
        "fit_formulation2: lambda2 must be positive, otherwise the coupling "
        "term vanishes and Gamma is undetermined");
  }
  if (hp.lambda1 < 0.0 || hp.lambda3 < 0.0) {
    throw input_error("fit_formulation2: penalties must be nonnegative");
  }
  validate_edges(edges.column_edges, data.k(), "column edges");
  validate_edges(edges.row_edges, data.p(), "row edges");

  const int p = data.p();
  const int k = data.k();
  LassoOptions lasso_opt;
  lasso_opt.kkt_tol = std::min(1e-6, cfg.inner_tol);

  CoefficientMatrix gamma;
  if (init_gamma) {
    if (init_gamma->rows() != p || init_gamma->cols() != k) {
      throw input_error("fit_formulation2: init_gamma must be p x k");
    }
    gamma = *init_gamma;
  } else {
    gamma = pilot_lasso(data, hp.lambda1, lasso_opt, threads);
  }
  CoefficientMatrix theta = gamma;

  // Gram system of the augmented design: X~^T X~ = X^T X + lambda2 I and
  // X~^T y~ = X^T y_s + lambda2 gamma_s. Built once per distinct design.
  std::vector<Matrix> grams;
  Matrix xty(p, k);
  if (data.has_shared_design()) {
    const Matrix& X = data.shared_design();
    grams.push_back(X.transpose() * X + hp.lambda2 * Matrix::Identity(p, p));
    xty = X.transpose() * data.responses();
  } else {
    grams.reserve(k);
    for (int s = 0; s < k; ++s) {
      const Matrix& X = data.design(s);
      grams.push_back(X.transpose() * X + hp.lambda2 * Matrix::Identity(p, p));
      xty.col(s) = X.transpose() * data.responses().col(s);
    }
  }

  const double nu = hp.lambda3 / hp.lambda2;
  CobraSolver cobra_solver(edges, cfg);

  auto gamma_step_value = [&](const CoefficientMatrix& g) {
    return hp.lambda2 * (theta - g).squaredNorm() +
           hp.lambda3 * (fusion_penalty(g, edges.column_edges, Axis::columns) +
                         fusion_penalty(g, edges.row_edges, Axis::rows));
  };

  FitResult result;
  result.objective_trace.push_back(objective_f2(data, theta, gamma, edges, hp));

  int m = 0;
  for (; m < hp.max_iter; ++m) {
    // Theta step: independent augmented Lasso per task, warm-started.
    bool inner_ok = true;
    std::vector<char> task_ok(k, 1);
    parallel_for(k, threads, [&](int s) {
      const Matrix& gram = grams[data.has_shared_design() ? 0 : s];
      const Vector rhs = xty.col(s) + hp.lambda2 * gamma.col(s);
      const Vector warm = theta.col(s);
      LassoResult fit = lasso_cd_gram(gram, rhs, hp.lambda1, lasso_opt, &warm);
      theta.col(s) = fit.beta;
      task_ok[s] = fit.converged ? 1 : 0;
    });
    for (char ok : task_ok) inner_ok = inner_ok && ok;
    if (!theta.allFinite()) {
      throw numerical_error("fit_formulation2: Theta step produced non-finite values");
    }

    // Gamma step: convex bi-clustering of Theta. Kept only if it does not
    // lose to the previous Gamma on its own subproblem (inner tolerance
    // slack could otherwise break the monotone trace).
    CobraResult cres = cobra_solver.solve(theta, nu);
    inner_ok = inner_ok && cres.converged;
    if (!cres.value.allFinite()) {
      throw numerical_error("fit_formulation2: cobra produced non-finite values");
    }
    if (gamma_step_value(cres.value) <= gamma_step_value(gamma)) {
      gamma = std::move(cres.value);
    }

    result.inner_converged = result.inner_converged && inner_ok;
    const double prev = result.objective_trace.back();
    const double value = objective_f2(data, theta, gamma, edges, hp);
    result.objective_trace.push_back(value);
    if (prev - value < hp.tol * (1.0 + std::abs(prev))) {
      result.converged = true;
      ++m;
      break;
    }
  }

  result.theta = std::move(theta);
  result.gamma = std::move(gamma);
  result.iterations = m;
  return result;
}

}  // namespace bifuse
