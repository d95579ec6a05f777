#pragma once

#include <cstdint>

#include "bifuse/types.hpp"

namespace bifuse {

/// Checkerboard generator configuration. Block sizes must sum to p and k.
struct GeneratorSpec {
  int n = 0;
  int p = 0;
  int k = 0;
  std::vector<int> row_partition;
  std::vector<int> col_partition;
  double zero_block_fraction = 0.5;
  std::vector<double> mu_support = {-2.0, -1.0, 1.0, 2.0};
  double sigma_eps = 0.25;
  double sigma_noise = 1.5;
  uint64_t seed = 0;
};

void validate_spec(const GeneratorSpec& spec);

/// True coefficient matrix with checkerboard structure: each (r, c) block
/// is zeroed with probability zero_block_fraction, otherwise filled with a
/// mean drawn uniformly from mu_support plus N(0, sigma_eps^2) jitter.
/// The returned assignment holds the generating partition; distinct blocks
/// keep distinct labels even when both are zeroed.
std::pair<CoefficientMatrix, ClusterAssignment> checkerboard_theta(
    const GeneratorSpec& spec);

/// Y = X Theta* + E with X entries iid standard normal and E iid
/// N(0, sigma_noise^2). Draws X, Theta* and E from separate substreams of
/// the seed, so the design does not depend on sigma_noise.
TaskDataset simulate_dataset(const CoefficientMatrix& theta_star, int n,
                             double sigma_noise, uint64_t seed);

/// Labels of the generating partition: item t gets the index of its block.
std::vector<int> partition_labels(const std::vector<int>& block_sizes);

}  // namespace bifuse
