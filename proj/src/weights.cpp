#include "bifuse/weights.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bifuse {

namespace {

constexpr double kKernelFloor = 1e-12;

std::vector<WeightedEdge> normalize_axis(std::vector<WeightedEdge> edges,
                                         double target, const char* what) {
  if (edges.empty()) return edges;
  double sum = 0.0;
  for (const auto& e : edges) sum += e.w;
  if (sum <= 0.0) {
    throw degenerate_weights_error(std::string(what) +
                                   ": all weights are zero, cannot normalize");
  }
  std::erase_if(edges, [](const WeightedEdge& e) { return e.w == 0.0; });
  const double scale = target / sum;
  for (auto& e : edges) e.w *= scale;
  return edges;
}

}  // namespace

std::vector<WeightedEdge> knn_gaussian_weights(const Matrix& M, int kappa,
                                               double phi, Axis axis) {
  const int m = axis == Axis::columns ? static_cast<int>(M.cols())
                                      : static_cast<int>(M.rows());
  if (kappa < 1) throw input_error("kappa must be positive");
  if (kappa >= m) {
    throw input_error("kappa = " + std::to_string(kappa) +
                      " must be smaller than the axis size " + std::to_string(m));
  }
  if (phi < 0.0 || !std::isfinite(phi)) {
    throw input_error("phi must be a nonnegative finite real");
  }

  Matrix d2(m, m);
  d2.setZero();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double dist2 = axis == Axis::columns
                               ? (M.col(i) - M.col(j)).squaredNorm()
                               : (M.row(i) - M.row(j)).squaredNorm();
      d2(i, j) = dist2;
      d2(j, i) = dist2;
    }
  }

  // Union of directed kappa-NN relations; ties break toward smaller index.
  std::set<std::pair<int, int>> kept;
  std::vector<std::pair<double, int>> order;
  order.reserve(m - 1);
  for (int i = 0; i < m; ++i) {
    order.clear();
    for (int j = 0; j < m; ++j) {
      if (j != i) order.emplace_back(d2(i, j), j);
    }
    std::sort(order.begin(), order.end());
    for (int r = 0; r < kappa; ++r) {
      const int j = order[r].second;
      kept.insert({std::min(i, j), std::max(i, j)});
    }
  }

  std::vector<WeightedEdge> edges;
  edges.reserve(kept.size());
  for (const auto& [i, j] : kept) {
    const double w = std::exp(-phi * d2(i, j));
    if (w < kKernelFloor) continue;
    edges.push_back({i, j, w, 1.0});
  }
  return edges;
}

EdgeWeights normalize_weights(EdgeWeights edges, int n, int p) {
  if (n < 1 || p < 1) throw input_error("normalize_weights: n and p must be >= 1");
  edges.column_edges = normalize_axis(std::move(edges.column_edges),
                                      1.0 / std::sqrt(static_cast<double>(n)),
                                      "column weights");
  edges.row_edges = normalize_axis(std::move(edges.row_edges),
                                   1.0 / std::sqrt(static_cast<double>(p)),
                                   "row weights");
  return edges;
}

EdgeWeights pilot_weights(const Matrix& pilot, int kappa, double phi, int n,
                          ClusterMode mode) {
  EdgeWeights edges;
  if (mode != ClusterMode::rows_only) {
    edges.column_edges = knn_gaussian_weights(pilot, kappa, phi, Axis::columns);
    if (edges.column_edges.empty()) {
      throw degenerate_weights_error(
          "all column kernel weights underflowed; phi is too large for the "
          "pilot's column distances");
    }
  }
  if (mode != ClusterMode::columns_only) {
    edges.row_edges = knn_gaussian_weights(pilot, kappa, phi, Axis::rows);
    if (edges.row_edges.empty()) {
      throw degenerate_weights_error(
          "all row kernel weights underflowed; phi is too large for the "
          "pilot's row distances");
    }
  }
  return normalize_weights(std::move(edges), n, static_cast<int>(pilot.rows()));
}

}  // namespace bifuse
