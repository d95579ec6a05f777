#include "bifuse/objective.hpp"

namespace bifuse {

double fusion_penalty(const Matrix& M, const std::vector<WeightedEdge>& edges,
                      Axis axis) {
  const int size =
      axis == Axis::columns ? static_cast<int>(M.cols()) : static_cast<int>(M.rows());
  validate_edges(edges, size, "fusion_penalty");
  double total = 0.0;
  if (axis == Axis::columns) {
    for (const auto& e : edges) {
      total += e.w * (M.col(e.i) - e.sign * M.col(e.j)).norm();
    }
  } else {
    for (const auto& e : edges) {
      total += e.w * (M.row(e.i) - e.sign * M.row(e.j)).norm();
    }
  }
  return total;
}

double squared_loss(const TaskDataset& data, const CoefficientMatrix& theta) {
  if (theta.rows() != data.p() || theta.cols() != data.k()) {
    throw input_error("theta must be p x k");
  }
  if (!theta.allFinite()) throw input_error("theta contains non-finite entries");
  if (data.has_shared_design()) {
    return (data.responses() - data.shared_design() * theta).squaredNorm();
  }
  double loss = 0.0;
  for (int s = 0; s < data.k(); ++s) {
    loss += (data.responses().col(s) - data.design(s) * theta.col(s)).squaredNorm();
  }
  return loss;
}

double lasso_objective(const Matrix& X, const Vector& y, const Vector& beta,
                       double lambda1) {
  if (X.rows() != y.size() || X.cols() != beta.size()) {
    throw input_error("lasso_objective: dimension mismatch");
  }
  return (y - X * beta).squaredNorm() + lambda1 * beta.lpNorm<1>();
}

double objective_f1(const TaskDataset& data, const CoefficientMatrix& theta,
                    const EdgeWeights& edges, const Hyperparameters& hp) {
  double value = squared_loss(data, theta);
  value += hp.lambda1 * theta.lpNorm<1>();
  if (hp.lambda2 != 0.0) {
    value += hp.lambda2 * (fusion_penalty(theta, edges.column_edges, Axis::columns) +
                           fusion_penalty(theta, edges.row_edges, Axis::rows));
  }
  return value;
}

double objective_f2(const TaskDataset& data, const CoefficientMatrix& theta,
                    const CoefficientMatrix& gamma, const EdgeWeights& edges,
                    const Hyperparameters& hp) {
  if (gamma.rows() != theta.rows() || gamma.cols() != theta.cols()) {
    throw input_error("theta and gamma must have the same shape");
  }
  double value = squared_loss(data, theta);
  value += hp.lambda1 * theta.lpNorm<1>();
  value += hp.lambda2 * (theta - gamma).squaredNorm();
  if (hp.lambda3 != 0.0) {
    value += hp.lambda3 * (fusion_penalty(gamma, edges.column_edges, Axis::columns) +
                           fusion_penalty(gamma, edges.row_edges, Axis::rows));
  }
  return value;
}

}  // namespace bifuse
