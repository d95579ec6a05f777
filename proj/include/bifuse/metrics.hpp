#pragma once

#include "bifuse/types.hpp"

namespace bifuse {

/// Pair-counting confusion over all C(m,2) unordered item pairs.
struct PairConfusion {
  long long tp = 0;  // same cluster in both partitions
  long long fp = 0;  // same in pred, different in truth
  long long fn = 0;  // different in pred, same in truth
  long long tn = 0;  // different in both
};

PairConfusion pair_confusion(const std::vector<int>& pred,
                             const std::vector<int>& truth);

/// 2PR/(P+R) over the pair confusion; 0 when TP = 0.
double f1_score(const std::vector<int>& pred, const std::vector<int>& truth);

/// TP/(TP+FP+FN); 1 when TP = FP = FN = 0 (exact singleton agreement).
double jaccard_index(const std::vector<int>& pred, const std::vector<int>& truth);

/// Adjusted Rand index under the permutation model; 1 when the expected
/// index equals the maximum (both partitions trivial and equal).
double adjusted_rand(const std::vector<int>& pred, const std::vector<int>& truth);

/// Induced bi-cluster labels of all p*k cells, flattened row-major; the
/// label of cell (r, c) is the canonical index of the pair
/// (row_labels[r], col_labels[c]).
std::vector<int> bicluster_labels(const ClusterAssignment& assignment);

/// sqrt(mean squared entrywise error).
double rmse(const Matrix& pred, const Matrix& actual);

/// ||theta_hat - theta_star||_F / ||theta_star||_F.
double recovery_accuracy(const Matrix& theta_hat, const Matrix& theta_star);

}  // namespace bifuse
