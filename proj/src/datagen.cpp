#include "bifuse/datagen.hpp"

#include <cmath>
#include <numeric>

#include "bifuse/rng.hpp"

namespace bifuse {

namespace {

// Substream tags; one stream per independently drawn block of values.
constexpr uint64_t kStreamTheta = 1;
constexpr uint64_t kStreamDesign = 2;
constexpr uint64_t kStreamNoise = 3;

}  // namespace

void validate_spec(const GeneratorSpec& spec) {
  if (spec.n < 1 || spec.p < 1 || spec.k < 1) {
    throw input_error("generator: n, p, k must be >= 1");
  }
  auto check_partition = [](const std::vector<int>& part, int total,
                            const char* name) {
    if (part.empty()) throw input_error(std::string("generator: empty ") + name);
    int sum = 0;
    for (int b : part) {
      if (b < 1) throw input_error(std::string("generator: ") + name +
                                   " has non-positive block size");
      sum += b;
    }
    if (sum != total) {
      throw input_error(std::string("generator: ") + name + " sums to " +
                        std::to_string(sum) + ", expected " + std::to_string(total));
    }
  };
  check_partition(spec.row_partition, spec.p, "row_partition");
  check_partition(spec.col_partition, spec.k, "col_partition");
  if (spec.zero_block_fraction < 0.0 || spec.zero_block_fraction >= 1.0) {
    throw input_error("generator: zero_block_fraction must be in [0, 1)");
  }
  if (spec.mu_support.empty()) {
    throw input_error("generator: mu_support must be non-empty");
  }
  if (spec.sigma_eps < 0.0 || spec.sigma_noise < 0.0) {
    throw input_error("generator: sigmas must be nonnegative");
  }
}

std::vector<int> partition_labels(const std::vector<int>& block_sizes) {
  std::vector<int> labels;
  for (size_t b = 0; b < block_sizes.size(); ++b) {
    labels.insert(labels.end(), block_sizes[b], static_cast<int>(b));
  }
  return labels;
}

std::pair<CoefficientMatrix, ClusterAssignment> checkerboard_theta(
    const GeneratorSpec& spec) {
  validate_spec(spec);
  Rng rng = Rng::substream(spec.seed, kStreamTheta);

  CoefficientMatrix theta = CoefficientMatrix::Zero(spec.p, spec.k);
  int row_start = 0;
  for (int rb : spec.row_partition) {
    int col_start = 0;
    for (int cb : spec.col_partition) {
      const bool zero_block = rng.uniform01() < spec.zero_block_fraction;
      if (!zero_block) {
        const double mu =
            spec.mu_support[rng.uniform_int(static_cast<int>(spec.mu_support.size()))];
        for (int r = row_start; r < row_start + rb; ++r) {
          for (int c = col_start; c < col_start + cb; ++c) {
            theta(r, c) = mu + spec.sigma_eps * rng.normal();
          }
        }
      }
      col_start += cb;
    }
    row_start += rb;
  }

  ClusterAssignment truth;
  truth.row_labels = partition_labels(spec.row_partition);
  truth.col_labels = partition_labels(spec.col_partition);
  return {std::move(theta), std::move(truth)};
}

TaskDataset simulate_dataset(const CoefficientMatrix& theta_star, int n,
                             double sigma_noise, uint64_t seed) {
  if (n < 1) throw input_error("simulate_dataset: n must be >= 1");
  if (sigma_noise < 0.0) {
    throw input_error("simulate_dataset: sigma_noise must be nonnegative");
  }
  const int p = static_cast<int>(theta_star.rows());
  const int k = static_cast<int>(theta_star.cols());

  Rng design_rng = Rng::substream(seed, kStreamDesign);
  Matrix X(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) X(i, j) = design_rng.normal();
  }

  Rng noise_rng = Rng::substream(seed, kStreamNoise);
  Matrix Y = X * theta_star;
  if (sigma_noise > 0.0) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) Y(i, j) += sigma_noise * noise_rng.normal();
    }
  }
  return TaskDataset(std::move(X), std::move(Y));
}

}  // namespace bifuse
