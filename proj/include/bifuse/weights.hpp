#pragma once

#include "bifuse/types.hpp"

namespace bifuse {

/// Gaussian-kernel weights over a k-nearest-neighbor graph along one axis
/// of M. Edge (i, j) is kept iff j is among i's kappa nearest items or vice
/// versa; its weight is exp(-phi * ||M_i - M_j||_2^2). Ties in the neighbor
/// ranking break toward the smaller index. Edges whose kernel value falls
/// below 1e-12 are dropped.
std::vector<WeightedEdge> knn_gaussian_weights(const Matrix& M, int kappa,
                                               double phi, Axis axis);

/// Rescales column weights to sum to 1/sqrt(n) and row weights to sum to
/// 1/sqrt(p), dropping zero-weight edges. Throws degenerate_weights_error
/// if an axis has edges but no positive weight.
EdgeWeights normalize_weights(EdgeWeights edges, int n, int p);

enum class ClusterMode { bicluster, columns_only, rows_only };

/// Builds the normalized fusion graph from a pilot coefficient estimate,
/// populating only the axes active under `mode`.
EdgeWeights pilot_weights(const Matrix& pilot, int kappa, double phi, int n,
                          ClusterMode mode = ClusterMode::bicluster);

}  // namespace bifuse
