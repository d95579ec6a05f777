#include "bifuse/prox.hpp"

#include <algorithm>
#include <cmath>

#include "bifuse/objective.hpp"

namespace bifuse {

Vector prox_l1(const Vector& b, double threshold) {
  if (!b.allFinite()) throw input_error("prox_l1: non-finite input");
  if (threshold < 0.0) throw input_error("prox_l1: negative threshold");
  return b.unaryExpr([threshold](double v) {
    const double mag = std::abs(v) - threshold;
    return mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
  });
}

Matrix soft_threshold(const Matrix& B, double threshold) {
  if (threshold < 0.0) throw input_error("soft_threshold: negative threshold");
  return B.unaryExpr([threshold](double v) {
    const double mag = std::abs(v) - threshold;
    return mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
  });
}

RidgeProx::RidgeProx(const TaskDataset& data, double sigma) {
  if (sigma <= 0.0 || !std::isfinite(sigma)) {
    throw input_error("RidgeProx: sigma must be positive");
  }
  p_ = data.p();
  k_ = data.k();
  shared_ = data.has_shared_design();
  const int n_factors = shared_ ? 1 : k_;
  const Matrix half_identity = 0.5 * Matrix::Identity(p_, p_);
  llt_.reserve(n_factors);
  for (int s = 0; s < n_factors; ++s) {
    const Matrix& X = data.design(s);
    llt_.emplace_back(Matrix(sigma * (X.transpose() * X) + half_identity));
  }
  scaled_xty_.resize(p_, k_);
  for (int s = 0; s < k_; ++s) {
    scaled_xty_.col(s) = sigma * (data.design(s).transpose() * data.responses().col(s));
  }
}

Matrix RidgeProx::apply(const Matrix& B) const {
  if (B.rows() != p_ || B.cols() != k_) {
    throw input_error("RidgeProx::apply: input must be p x k");
  }
  if (!B.allFinite()) throw input_error("RidgeProx::apply: non-finite input");
  Matrix rhs = scaled_xty_ + 0.5 * B;
  if (shared_) return llt_[0].solve(rhs);
  Matrix out(p_, k_);
  for (int s = 0; s < k_; ++s) {
    out.col(s) = llt_[s].solve(rhs.col(s));
  }
  return out;
}

Vector prox_ridge(const Vector& b, const TaskDataset& data, double sigma) {
  if (b.size() != static_cast<Eigen::Index>(data.p()) * data.k()) {
    throw input_error("prox_ridge: stacked vector must have length p*k");
  }
  RidgeProx op(data, sigma);
  Matrix B = Eigen::Map<const Matrix>(b.data(), data.p(), data.k());
  Matrix A = op.apply(B);
  return Eigen::Map<const Vector>(A.data(), A.size());
}

namespace detail {

ProxResult fusion_prox_columns(const Matrix& B,
                               const std::vector<WeightedEdge>& edges, double nu,
                               const ProxConfig& cfg, Matrix* dual) {
  const int d = static_cast<int>(B.rows());
  const int m = static_cast<int>(B.cols());
  const int n_edges = static_cast<int>(edges.size());
  validate_edges(edges, m, "prox_fusion");
  if (nu < 0.0 || !std::isfinite(nu)) throw input_error("prox_fusion: nu must be >= 0");
  if (!B.allFinite()) throw input_error("prox_fusion: non-finite input");

  if (nu == 0.0 || n_edges == 0) {
    if (dual) dual->setZero(d, n_edges);
    return {B, true, 0};
  }

  Matrix scratch;
  Matrix& lam = dual ? *dual : scratch;
  if (lam.rows() != d || lam.cols() != n_edges) lam.setZero(d, n_edges);

  // Dual-ascent step. The provable bound for the unweighted incidence
  // operator is 1/(2 * max degree); dividing by weights above 1 only
  // shrinks the step further.
  double step = cfg.ama_step;
  if (step <= 0.0) {
    std::vector<int> degree(m, 0);
    double max_w = 0.0;
    for (const auto& e : edges) {
      ++degree[e.i];
      ++degree[e.j];
      max_w = std::max(max_w, e.w);
    }
    const int max_degree = *std::max_element(degree.begin(), degree.end());
    step = 1.0 / (2.0 * max_degree * std::max(1.0, max_w));
  }

  // Gradient of the dual at edge l is A_i - c A_j for the current primal
  // A = B - sum_l lam_l d_l^T; differences of B are fixed so precompute them.
  Matrix bdiff(d, n_edges);
  Vector radius(n_edges);
  for (int l = 0; l < n_edges; ++l) {
    const auto& e = edges[l];
    bdiff.col(l) = B.col(e.i) - e.sign * B.col(e.j);
    radius(l) = nu * e.w;
  }

  Matrix A = B;
  for (int l = 0; l < n_edges; ++l) {
    const auto& e = edges[l];
    A.col(e.i) -= lam.col(l);
    A.col(e.j) += e.sign * lam.col(l);
  }

  double dual_value = -std::numeric_limits<double>::infinity();
  bool converged = false;
  int it = 0;
  for (; it < cfg.inner_max_iter; ++it) {
    for (int l = 0; l < n_edges; ++l) {
      const auto& e = edges[l];
      lam.col(l) += step * (A.col(e.i) - e.sign * A.col(e.j));
      const double norm = lam.col(l).norm();
      if (norm > radius(l)) lam.col(l) *= radius(l) / norm;
    }
    A = B;
    for (int l = 0; l < n_edges; ++l) {
      const auto& e = edges[l];
      A.col(e.i) -= lam.col(l);
      A.col(e.j) += e.sign * lam.col(l);
    }
    // dual(Lam) = <Lam, B D> - 1/2 || Lam D^T ||_F^2 with Lam D^T = B - A.
    const double next = (lam.array() * bdiff.array()).sum() - 0.5 * (B - A).squaredNorm();
    if (std::abs(next - dual_value) <= cfg.inner_tol * (1.0 + std::abs(next))) {
      dual_value = next;
      converged = true;
      ++it;
      break;
    }
    dual_value = next;
  }
  return {std::move(A), converged, it};
}

}  // namespace detail

ProxResult prox_fusion(const Matrix& M, const std::vector<WeightedEdge>& edges,
                       Axis axis, double nu, const ProxConfig& cfg) {
  if (axis == Axis::columns) {
    return detail::fusion_prox_columns(M, edges, nu, cfg, nullptr);
  }
  Matrix Mt = M.transpose();
  ProxResult res = detail::fusion_prox_columns(Mt, edges, nu, cfg, nullptr);
  res.value.transposeInPlace();
  return res;
}

CobraSolver::CobraSolver(EdgeWeights edges, ProxConfig cfg)
    : edges_(std::move(edges)), cfg_(cfg) {}

CobraResult CobraSolver::solve(const Matrix& theta, double nu) {
  if (!theta.allFinite()) throw input_error("cobra: non-finite input");
  if (nu < 0.0 || !std::isfinite(nu)) throw input_error("cobra: nu must be >= 0");
  const int p = static_cast<int>(theta.rows());
  const int k = static_cast<int>(theta.cols());
  validate_edges(edges_.column_edges, k, "cobra column edges");
  validate_edges(edges_.row_edges, p, "cobra row edges");

  if (nu == 0.0 || (edges_.column_edges.empty() && edges_.row_edges.empty())) {
    return {theta, true, 0, {0.0}};
  }

  // The target splits as 2 * [ 1/2||Gamma-Theta||^2 + (nu/2) Omega_row
  //   + (nu/2) Omega_col ], so each Dykstra prox runs at scale nu/2.
  const double scale = nu / 2.0;

  Matrix gamma = theta;
  Matrix P = Matrix::Zero(p, k);  // row-step correction
  Matrix Q = Matrix::Zero(k, p);  // column-step correction

  auto eq7_value = [&](const Matrix& g) {
    return (theta - g).squaredNorm() +
           nu * (fusion_penalty(g, edges_.column_edges, Axis::columns) +
                 fusion_penalty(g, edges_.row_edges, Axis::rows));
  };

  CobraResult result;
  bool converged = false;
  bool inner_ok = true;
  int sweep = 0;
  for (; sweep < cfg_.inner_max_iter; ++sweep) {
    // Row clustering acts on the transposed matrix (rows become columns).
    Matrix row_input = (gamma + P).transpose();
    ProxResult row_prox = detail::fusion_prox_columns(row_input, edges_.row_edges,
                                                      scale, cfg_, &dual_row_);
    inner_ok = inner_ok && row_prox.converged;
    const Matrix& Y = row_prox.value;  // k x p
    P = gamma + P - Y.transpose();

    Matrix col_input = Y.transpose() + Q.transpose();
    ProxResult col_prox = detail::fusion_prox_columns(col_input, edges_.column_edges,
                                                      scale, cfg_, &dual_col_);
    inner_ok = inner_ok && col_prox.converged;
    Matrix gamma_next = col_prox.value;  // p x k
    Q = Y + Q - gamma_next.transpose();

    result.objective_trace.push_back(eq7_value(gamma_next));
    const double change = (gamma_next - gamma).norm() / (1.0 + gamma.norm());
    gamma = std::move(gamma_next);
    if (change < cfg_.inner_tol) {
      converged = true;
      ++sweep;
      break;
    }
  }

  result.value = std::move(gamma);
  result.converged = converged && inner_ok;
  result.sweeps = sweep;
  return result;
}

CobraResult cobra(const Matrix& theta, const EdgeWeights& edges, double nu,
                  const ProxConfig& cfg) {
  CobraSolver solver(edges, cfg);
  return solver.solve(theta, nu);
}

}  // namespace bifuse
