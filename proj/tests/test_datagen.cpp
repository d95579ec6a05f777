#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bifuse/datagen.hpp"

using namespace bifuse;

TEST_CASE("single noiseless block is constant at a support value") {
  GeneratorSpec spec;
  spec.n = 4;
  spec.p = 3;
  spec.k = 2;
  spec.row_partition = {3};
  spec.col_partition = {2};
  spec.zero_block_fraction = 0.0;
  spec.sigma_eps = 0.0;
  spec.seed = 42;
  auto [theta, truth] = checkerboard_theta(spec);
  const double v = theta(0, 0);
  CHECK((theta.array() == v).all());
  const auto& support = spec.mu_support;
  CHECK(std::find(support.begin(), support.end(), v) != support.end());
  CHECK(truth.row_labels == std::vector<int>{0, 0, 0});
  CHECK(truth.col_labels == std::vector<int>{0, 0});
}

TEST_CASE("generation is bitwise deterministic in the seed") {
  GeneratorSpec spec;
  spec.n = 6;
  spec.p = 4;
  spec.k = 4;
  spec.row_partition = {2, 2};
  spec.col_partition = {2, 2};
  spec.seed = 9;
  auto [a, ta] = checkerboard_theta(spec);
  auto [b, tb] = checkerboard_theta(spec);
  CHECK((a - b).norm() == 0.0);
  TaskDataset da = simulate_dataset(a, spec.n, 1.5, spec.seed);
  TaskDataset db = simulate_dataset(b, spec.n, 1.5, spec.seed);
  CHECK((da.shared_design() - db.shared_design()).norm() == 0.0);
  CHECK((da.responses() - db.responses()).norm() == 0.0);

  spec.seed = 10;
  auto [c, tc] = checkerboard_theta(spec);
  CHECK((a - c).norm() > 0.0);
}

TEST_CASE("within-block jitter has the configured scale") {
  GeneratorSpec spec;
  spec.n = 1;
  spec.p = 50;
  spec.k = 50;
  spec.row_partition = {50};
  spec.col_partition = {50};
  spec.zero_block_fraction = 0.0;
  spec.sigma_eps = 0.25;
  spec.seed = 5;
  auto [theta, truth] = checkerboard_theta(spec);
  const double mean = theta.mean();
  const double stdev =
      std::sqrt((theta.array() - mean).square().sum() / (theta.size() - 1));
  CHECK(stdev >= 0.2);
  CHECK(stdev <= 0.3);
}

TEST_CASE("zero blocks are exactly zero and keep their labels") {
  GeneratorSpec spec;
  spec.n = 2;
  spec.p = 4;
  spec.k = 4;
  spec.row_partition = {2, 2};
  spec.col_partition = {2, 2};
  spec.zero_block_fraction = 0.999999;  // every block zero with high odds
  spec.seed = 31;
  auto [theta, truth] = checkerboard_theta(spec);
  CHECK(theta.norm() == doctest::Approx(0.0));
  CHECK(count_clusters(truth.row_labels) == 2);
  CHECK(count_clusters(truth.col_labels) == 2);
}

TEST_CASE("columns of one true cluster share their block means") {
  GeneratorSpec spec;
  spec.n = 2;
  spec.p = 6;
  spec.k = 6;
  spec.row_partition = {3, 3};
  spec.col_partition = {3, 3};
  spec.zero_block_fraction = 0.5;
  spec.sigma_eps = 0.0;  // exact equality within blocks
  spec.seed = 17;
  auto [theta, truth] = checkerboard_theta(spec);
  for (int c1 = 0; c1 < 6; ++c1) {
    for (int c2 = c1 + 1; c2 < 6; ++c2) {
      if (truth.col_labels[c1] == truth.col_labels[c2]) {
        CHECK((theta.col(c1) - theta.col(c2)).norm() == doctest::Approx(0.0));
      }
    }
  }
}

TEST_CASE("noiseless responses are exact products") {
  GeneratorSpec spec;
  spec.n = 5;
  spec.p = 3;
  spec.k = 2;
  spec.row_partition = {3};
  spec.col_partition = {2};
  spec.zero_block_fraction = 0.0;
  spec.seed = 3;
  auto [theta, truth] = checkerboard_theta(spec);
  TaskDataset data = simulate_dataset(theta, spec.n, 0.0, spec.seed);
  CHECK((data.responses() - data.shared_design() * theta).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("pure-noise responses have the configured variance") {
  Matrix theta_star = Matrix::Zero(2, 100);
  TaskDataset data = simulate_dataset(theta_star, 120, 2.0, 8);  // 12000 draws
  const double mean = data.responses().mean();
  const double var =
      (data.responses().array() - mean).square().sum() / (data.responses().size() - 1);
  CHECK(var == doctest::Approx(4.0).epsilon(0.10));
}

TEST_CASE("design draws do not depend on the noise level") {
  Matrix theta_star = Matrix::Zero(3, 2);
  TaskDataset quiet = simulate_dataset(theta_star, 10, 0.0, 4);
  TaskDataset loud = simulate_dataset(theta_star, 10, 3.0, 4);
  CHECK((quiet.shared_design() - loud.shared_design()).norm() == 0.0);
}

TEST_CASE("generator validates its spec") {
  GeneratorSpec spec;
  spec.n = 4;
  spec.p = 3;
  spec.k = 2;
  spec.row_partition = {2};  // sums to 2, not 3
  spec.col_partition = {2};
  CHECK_THROWS_AS(checkerboard_theta(spec), input_error);
  spec.row_partition = {3};
  spec.zero_block_fraction = 1.0;
  CHECK_THROWS_AS(checkerboard_theta(spec), input_error);
  spec.zero_block_fraction = 0.5;
  spec.mu_support = {};
  CHECK_THROWS_AS(checkerboard_theta(spec), input_error);
}
