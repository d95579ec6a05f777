#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bifuse {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// p x k parameter matrix (one coefficient column per task). The surrogate
/// matrix used by formulation 2 has the same shape and uses the same alias.
using CoefficientMatrix = Eigen::MatrixXd;

/// Invalid caller input (dimension mismatch, bad indices, malformed files).
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Weight normalization asked for an axis whose weights are all zero.
struct degenerate_weights_error : input_error {
  using input_error::input_error;
};

/// Iterates became non-finite inside a solver.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Axis { columns, rows };

/// One fusion edge between items i < j along an axis. `sign` is the
/// optional c_ij in {-1, +1}; +1 fuses values, -1 fuses values of equal
/// magnitude and opposite sign.
struct WeightedEdge {
  int i = 0;
  int j = 0;
  double w = 0.0;
  double sign = 1.0;
};

/// Sparse fusion graphs over column pairs (tasks) and row pairs (features).
struct EdgeWeights {
  std::vector<WeightedEdge> column_edges;
  std::vector<WeightedEdge> row_edges;
};

/// Throws input_error unless edges have i < j < size, w >= 0, sign in
/// {-1,+1} and no duplicate (i,j) pair.
void validate_edges(const std::vector<WeightedEdge>& edges, int size,
                    const char* what);

/// Design/response data for k regression tasks. The shared-design form is
/// canonical; the per-task form keeps one n x p design per task.
class TaskDataset {
 public:
  TaskDataset(Matrix design, Matrix responses);
  TaskDataset(std::vector<Matrix> designs, Matrix responses);

  int n() const { return n_; }
  int p() const { return p_; }
  int k() const { return k_; }

  bool has_shared_design() const { return designs_.size() == 1; }
  /// Design matrix of `task`; for a shared design every task maps to the
  /// same matrix without copies.
  const Matrix& design(int task) const {
    return designs_[has_shared_design() ? 0 : static_cast<size_t>(task)];
  }
  const Matrix& shared_design() const;
  const Matrix& responses() const { return responses_; }

 private:
  std::vector<Matrix> designs_;
  Matrix responses_;
  int n_ = 0;
  int p_ = 0;
  int k_ = 0;
};

struct Hyperparameters {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;  // unused by formulation 1
  double phi = 20.0;     // Gaussian kernel scale for similarity weights
  int kappa = 5;         // neighbor count for the weight graph
  double gamma = 1.0;    // proximal-decomposition step, unused by formulation 2
  double tol = 1e-6;
  int max_iter = 1000;
};

struct FitResult {
  CoefficientMatrix theta;
  std::optional<CoefficientMatrix> gamma;  // formulation 2 only
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  /// Inner prox/lasso solvers all met their own tolerances.
  bool inner_converged = true;

  /// Theta - Gamma, the per-task component not captured by the clustered
  /// surrogate. Empty for formulation 1 results.
  std::optional<CoefficientMatrix> task_specific_component() const {
    if (!gamma) return std::nullopt;
    return theta - *gamma;
  }
};

/// Row and column cluster labels; 0-based, contiguous, first occurrence
/// gets the smallest unused label. The bi-cluster of cell (r, c) is the
/// pair (row_labels[r], col_labels[c]).
struct ClusterAssignment {
  std::vector<int> row_labels;
  std::vector<int> col_labels;
};

/// Relabels arbitrary integer labels to the canonical form.
std::vector<int> canonicalize_labels(const std::vector<int>& labels);

int count_clusters(const std::vector<int>& labels);

}  // namespace bifuse
