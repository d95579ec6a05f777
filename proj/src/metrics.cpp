#include "bifuse/metrics.hpp"

#include <cmath>

namespace bifuse {

namespace {

long long choose2(long long x) { return x * (x - 1) / 2; }

struct Contingency {
  std::vector<long long> pred_sizes;
  std::vector<long long> truth_sizes;
  // cells[a][b] = items with pred label a and truth label b
  std::vector<std::vector<long long>> cells;
  long long m = 0;
};

Contingency contingency_table(const std::vector<int>& pred,
                              const std::vector<int>& truth) {
  if (pred.size() != truth.size()) {
    throw input_error("label vectors must have equal length");
  }
  if (pred.size() < 2) {
    throw input_error("pair counting requires at least 2 items");
  }
  const std::vector<int> a = canonicalize_labels(pred);
  const std::vector<int> b = canonicalize_labels(truth);
  Contingency t;
  t.m = static_cast<long long>(a.size());
  const int ra = count_clusters(a);
  const int rb = count_clusters(b);
  t.pred_sizes.assign(ra, 0);
  t.truth_sizes.assign(rb, 0);
  t.cells.assign(ra, std::vector<long long>(rb, 0));
  for (size_t i = 0; i < a.size(); ++i) {
    ++t.pred_sizes[a[i]];
    ++t.truth_sizes[b[i]];
    ++t.cells[a[i]][b[i]];
  }
  return t;
}

}  // namespace

PairConfusion pair_confusion(const std::vector<int>& pred,
                             const std::vector<int>& truth) {
  const Contingency t = contingency_table(pred, truth);
  long long tp = 0;
  for (const auto& row : t.cells) {
    for (long long c : row) tp += choose2(c);
  }
  long long same_pred = 0;
  for (long long s : t.pred_sizes) same_pred += choose2(s);
  long long same_truth = 0;
  for (long long s : t.truth_sizes) same_truth += choose2(s);

  PairConfusion out;
  out.tp = tp;
  out.fp = same_pred - tp;
  out.fn = same_truth - tp;
  out.tn = choose2(t.m) - out.tp - out.fp - out.fn;
  return out;
}

double f1_score(const std::vector<int>& pred, const std::vector<int>& truth) {
  const PairConfusion c = pair_confusion(pred, truth);
  if (c.tp == 0) return 0.0;
  const double precision = static_cast<double>(c.tp) / (c.tp + c.fp);
  const double recall = static_cast<double>(c.tp) / (c.tp + c.fn);
  return 2.0 * precision * recall / (precision + recall);
}

double jaccard_index(const std::vector<int>& pred,
                     const std::vector<int>& truth) {
  const PairConfusion c = pair_confusion(pred, truth);
  const long long denom = c.tp + c.fp + c.fn;
  if (denom == 0) return 1.0;  // both all-singletons: exact agreement
  return static_cast<double>(c.tp) / denom;
}

double adjusted_rand(const std::vector<int>& pred,
                     const std::vector<int>& truth) {
  const Contingency t = contingency_table(pred, truth);
  double index = 0.0;
  for (const auto& row : t.cells) {
    for (long long c : row) index += choose2(c);
  }
  double sum_pred = 0.0, sum_truth = 0.0;
  for (long long s : t.pred_sizes) sum_pred += choose2(s);
  for (long long s : t.truth_sizes) sum_truth += choose2(s);
  const double expected = sum_pred * sum_truth / choose2(t.m);
  const double maximum = 0.5 * (sum_pred + sum_truth);
  if (maximum == expected) return 1.0;  // both partitions trivial and equal
  return (index - expected) / (maximum - expected);
}

std::vector<int> bicluster_labels(const ClusterAssignment& assignment) {
  const int p = static_cast<int>(assignment.row_labels.size());
  const int k = static_cast<int>(assignment.col_labels.size());
  const int n_col = k > 0 ? count_clusters(assignment.col_labels) : 0;
  std::vector<int> raw;
  raw.reserve(static_cast<size_t>(p) * k);
  for (int r = 0; r < p; ++r) {
    for (int c = 0; c < k; ++c) {
      raw.push_back(assignment.row_labels[r] * n_col + assignment.col_labels[c]);
    }
  }
  return canonicalize_labels(raw);
}

double rmse(const Matrix& pred, const Matrix& actual) {
  if (pred.rows() != actual.rows() || pred.cols() != actual.cols()) {
    throw input_error("rmse: shape mismatch");
  }
  if (pred.size() == 0) throw input_error("rmse: empty matrices");
  return std::sqrt((pred - actual).squaredNorm() / pred.size());
}

double recovery_accuracy(const Matrix& theta_hat, const Matrix& theta_star) {
  if (theta_hat.rows() != theta_star.rows() ||
      theta_hat.cols() != theta_star.cols()) {
    throw input_error("recovery_accuracy: shape mismatch");
  }
  const double denom = theta_star.norm();
  if (denom == 0.0) {
    throw input_error("recovery_accuracy: true matrix must be nonzero");
  }
  return (theta_hat - theta_star).norm() / denom;
}

}  // namespace bifuse
