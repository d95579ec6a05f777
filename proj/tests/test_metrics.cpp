#include <doctest.h>

#include "bifuse/metrics.hpp"
#include "bifuse/rng.hpp"
#include "oracles.hpp"

using namespace bifuse;

TEST_CASE("pair_confusion on identical two-pair partitions") {
  std::vector<int> labels = {1, 1, 2, 2};
  PairConfusion c = pair_confusion(labels, labels);
  CHECK(c.tp == 2);
  CHECK(c.fp == 0);
  CHECK(c.fn == 0);
  CHECK(c.tn == 4);
}

TEST_CASE("pair_confusion hand-enumerated example") {
  std::vector<int> pred = {1, 1, 2, 2};
  std::vector<int> truth = {1, 1, 2, 3};
  PairConfusion c = pair_confusion(pred, truth);
  CHECK(c.tp == 1);
  CHECK(c.fp == 1);
  CHECK(c.fn == 0);
  CHECK(c.tn == 4);
}

TEST_CASE("all-singleton predictions produce no positive pairs") {
  std::vector<int> pred = {0, 1, 2, 3};
  std::vector<int> truth = {1, 1, 2, 2};
  PairConfusion c = pair_confusion(pred, truth);
  CHECK(c.tp == 0);
  CHECK(c.fp == 0);
}

TEST_CASE("pair_confusion rejects mismatched lengths") {
  CHECK_THROWS_AS(pair_confusion({1, 2}, {1, 2, 3}), input_error);
  CHECK_THROWS_AS(pair_confusion({1}, {1}), input_error);
}

TEST_CASE("f1_score examples") {
  CHECK(f1_score({1, 1, 2, 2}, {1, 1, 2, 2}) == doctest::Approx(1.0));
  CHECK(f1_score({1, 1, 2, 2}, {1, 1, 2, 3}) == doctest::Approx(2.0 / 3.0));
  CHECK(f1_score({1, 1, 2}, {1, 2, 2}) == doctest::Approx(0.0));
}

TEST_CASE("jaccard_index examples") {
  CHECK(jaccard_index({1, 1, 2, 2}, {1, 1, 2, 2}) == doctest::Approx(1.0));
  CHECK(jaccard_index({1, 1, 2, 2}, {1, 1, 2, 3}) == doctest::Approx(0.5));
  CHECK(jaccard_index({0, 1, 2}, {5, 6, 7}) == doctest::Approx(1.0));
}

TEST_CASE("adjusted_rand examples") {
  CHECK(adjusted_rand({1, 1, 2, 2}, {1, 1, 2, 2}) == doctest::Approx(1.0));
  CHECK(adjusted_rand({1, 1, 2, 2}, {1, 1, 1, 2}) == doctest::Approx(0.0));
  CHECK(adjusted_rand({3, 3, 3}, {9, 9, 9}) == doctest::Approx(1.0));
  CHECK(adjusted_rand({0, 1, 2}, {5, 6, 7}) == doctest::Approx(1.0));
}

TEST_CASE("clustering scores match the pair-enumeration oracle") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 2 + rng.uniform_int(11);
    std::vector<int> pred(m), truth(m);
    const int kp = 1 + rng.uniform_int(m);
    const int kt = 1 + rng.uniform_int(m);
    for (int i = 0; i < m; ++i) {
      pred[i] = rng.uniform_int(kp);
      truth[i] = rng.uniform_int(kt);
    }
    CHECK(adjusted_rand(pred, truth) ==
          doctest::Approx(oracles::ari_bruteforce(pred, truth)).epsilon(1e-12));
    CHECK(f1_score(pred, truth) ==
          doctest::Approx(oracles::f1_bruteforce(pred, truth)).epsilon(1e-12));
    CHECK(jaccard_index(pred, truth) ==
          doctest::Approx(oracles::jaccard_bruteforce(pred, truth)).epsilon(1e-12));
  }
}

TEST_CASE("scores are symmetric under relabeling") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 4 + rng.uniform_int(8);
    std::vector<int> pred(m), truth(m), shuffled(m);
    for (int i = 0; i < m; ++i) {
      pred[i] = rng.uniform_int(3);
      truth[i] = rng.uniform_int(3);
    }
    // Relabel pred through a fixed permutation of label ids.
    const int remap[3] = {2, 0, 1};
    for (int i = 0; i < m; ++i) shuffled[i] = remap[pred[i]];
    CHECK(adjusted_rand(shuffled, truth) == doctest::Approx(adjusted_rand(pred, truth)));
    CHECK(f1_score(shuffled, truth) == doctest::Approx(f1_score(pred, truth)));
    CHECK(jaccard_index(shuffled, truth) ==
          doctest::Approx(jaccard_index(pred, truth)));
  }
}

TEST_CASE("random partitions have near-zero expected ARI") {
  Rng rng(17);
  double total = 0.0;
  const int draws = 200;
  for (int trial = 0; trial < draws; ++trial) {
    const int m = 30;
    std::vector<int> pred(m), truth(m);
    for (int i = 0; i < m; ++i) {
      pred[i] = rng.uniform_int(4);
      truth[i] = rng.uniform_int(4);
    }
    total += adjusted_rand(pred, truth);
  }
  const double mean = total / draws;
  CHECK(mean >= -0.1);
  CHECK(mean <= 0.1);
}

TEST_CASE("jaccard never exceeds the F-1 score") {
  Rng rng(19);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + rng.uniform_int(10);
    std::vector<int> pred(m), truth(m);
    for (int i = 0; i < m; ++i) {
      pred[i] = rng.uniform_int(4);
      truth[i] = rng.uniform_int(4);
    }
    // The exact-singleton-agreement convention (JI = 1, F-1 = 0) sits
    // outside the Jaccard/Dice inequality, which speaks about the ratios.
    const PairConfusion c = pair_confusion(pred, truth);
    if (c.tp + c.fp + c.fn == 0) continue;
    ++checked;
    CHECK(jaccard_index(pred, truth) <= f1_score(pred, truth) + 1e-12);
  }
  CHECK(checked > 200);
}

TEST_CASE("bicluster_labels crosses row and column labels") {
  ClusterAssignment one;
  one.row_labels = {0, 0, 0};
  one.col_labels = {0, 0};
  std::vector<int> cells = bicluster_labels(one);
  CHECK(cells.size() == 6);
  CHECK(count_clusters(cells) == 1);

  ClusterAssignment grid;
  grid.row_labels = {0, 1};
  grid.col_labels = {0, 1, 2};
  CHECK(count_clusters(bicluster_labels(grid)) == 6);
}

TEST_CASE("bicluster labels are invariant to within-cluster row swaps") {
  ClusterAssignment a;
  a.row_labels = {0, 0, 1, 1};
  a.col_labels = {0, 1, 0};
  std::vector<int> base = bicluster_labels(a);
  // Swapping two rows of the same row-cluster permutes cells within blocks.
  ClusterAssignment swapped = a;
  std::swap(swapped.row_labels[0], swapped.row_labels[1]);
  std::vector<int> other = bicluster_labels(swapped);
  CHECK(adjusted_rand(base, other) == doctest::Approx(1.0));
}

TEST_CASE("rmse and recovery examples") {
  Matrix A = Matrix::Random(3, 4);
  CHECK(rmse(A, A) == doctest::Approx(0.0));
  CHECK(recovery_accuracy(A, A) == doctest::Approx(0.0));

  Matrix ones = Matrix::Ones(3, 4);
  CHECK(rmse(A + ones, A) == doctest::Approx(1.0));
  Matrix signs = ones;
  signs(0, 0) = -1.0;
  signs(2, 3) = -1.0;
  CHECK(rmse(A + signs, A) == doctest::Approx(1.0));

  CHECK(recovery_accuracy(2.0 * A, A) == doctest::Approx(1.0));
  CHECK_THROWS_AS(recovery_accuracy(A, Matrix::Zero(3, 4)), input_error);
  CHECK_THROWS_AS(rmse(A, Matrix::Zero(2, 2)), input_error);
}
