// End-to-end tests driving the command-line binary; the binary path comes
// in as argv[1].
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "bifuse/io.hpp"
#include "bifuse/metrics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_cli_path;

int run_cli(const std::string& args) {
  const std::string cmd = g_cli_path + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("bifuse_cli_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_sim_config(const std::string& path, int n, int p, int k,
                      uint64_t seed, double sigma = 0.5,
                      json extra = json::object()) {
  json cfg{{"n", n},
           {"p", p},
           {"k", k},
           {"row_partition", json::array({p})},
           {"col_partition", json::array({k})},
           {"zero_block_fraction", 0.0},
           {"sigma_noise", sigma},
           {"seed", seed}};
  for (auto& [key, value] : extra.items()) cfg[key] = value;
  std::ofstream out(path);
  out << cfg.dump(2);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("simulate writes a consistent, reproducible dataset") {
  TempDir dir("simulate");
  write_sim_config(dir.file("sim.json"), 8, 3, 2, 1);
  REQUIRE(run_cli("simulate --config " + dir.file("sim.json") + " --out-dir " +
                  dir.file("a")) == 0);

  const auto X = bifuse::read_csv_matrix(dir.file("a/X.csv"));
  const auto Y = bifuse::read_csv_matrix(dir.file("a/Y.csv"));
  const auto theta = bifuse::read_csv_matrix(dir.file("a/theta_star.csv"));
  CHECK(X.rows() == 8);
  CHECK(X.cols() == 3);
  CHECK(Y.rows() == 8);
  CHECK(Y.cols() == 2);
  CHECK(theta.rows() == 3);
  CHECK(theta.cols() == 2);
  const json truth = bifuse::read_json_file(dir.file("a/truth.json"));
  CHECK(truth.at("row_labels").size() == 3);
  CHECK(truth.at("col_labels").size() == 2);

  REQUIRE(run_cli("simulate --config " + dir.file("sim.json") + " --out-dir " +
                  dir.file("b")) == 0);
  for (const char* name : {"X.csv", "Y.csv", "theta_star.csv", "truth.json"}) {
    CHECK(slurp(dir.file(std::string("a/") + name)) ==
          slurp(dir.file(std::string("b/") + name)));
  }
}

TEST_CASE("simulate rejects block sizes that do not sum to p") {
  TempDir dir("simbad");
  json bad{{"n", 8},          {"p", 3},
           {"k", 2},          {"row_partition", json::array({2})},
           {"col_partition", json::array({2})}, {"seed", 1}};
  std::ofstream(dir.file("sim.json")) << bad.dump();
  CHECK(run_cli("simulate --config " + dir.file("sim.json") + " --out-dir " +
                dir.file("out")) == 2);
}

TEST_CASE("missing input files exit with code 2") {
  TempDir dir("missing");
  CHECK(run_cli("fit --x " + dir.file("nope.csv") + " --y " +
                dir.file("nope.csv")) == 2);
  CHECK(run_cli("bogus-subcommand") == 2);
}

TEST_CASE("fit emits matrices, clusters and a reproducible report") {
  TempDir dir("fit");
  write_sim_config(dir.file("sim.json"), 20, 4, 3, 7,
                   0.4, json{{"row_partition", {2, 2}}, {"col_partition", {2, 1}}});
  REQUIRE(run_cli("simulate --config " + dir.file("sim.json") + " --out-dir " +
                  dir.path.string()) == 0);

  const std::string common = " --x " + dir.file("X.csv") + " --y " +
                             dir.file("Y.csv") + " --kappa 2 --lambda1 0.2";
  REQUIRE(run_cli("fit" + common + " --formulation 1 --lambda2 0.5 --out-dir " +
                  dir.file("f1")) == 0);
  CHECK(fs::exists(dir.file("f1/theta.csv")));
  CHECK(fs::exists(dir.file("f1/clusters.json")));
  const json report = bifuse::read_json_file(dir.file("f1/report.json"));
  CHECK(report.at("formulation") == 1);
  CHECK(report.at("n_col_clusters").get<int>() >= 1);

  // Re-running with the recorded multipliers reproduces theta.csv.
  std::ostringstream rerun;
  rerun << "fit" << common << " --formulation 1 --lambda2 "
        << report.at("lambda2").get<double>() << " --out-dir " << dir.file("f1b");
  REQUIRE(run_cli(rerun.str()) == 0);
  const auto t1 = bifuse::read_csv_matrix(dir.file("f1/theta.csv"));
  const auto t2 = bifuse::read_csv_matrix(dir.file("f1b/theta.csv"));
  CHECK((t1 - t2).norm() <= 1e-8);
}

TEST_CASE("formulation 2 fit also writes the surrogate matrix") {
  TempDir dir("fitf2");
  write_sim_config(dir.file("sim.json"), 16, 3, 3, 9, 0.3);
  REQUIRE(run_cli("simulate --config " + dir.file("sim.json") + " --out-dir " +
                  dir.path.string()) == 0);
  REQUIRE(run_cli("fit --x " + dir.file("X.csv") + " --y " + dir.file("Y.csv") +
                  " --formulation 2 --lambda1 0.2 --lambda2 1.0 --lambda3 0.3"
                  " --kappa 2 --out-dir " +
                  dir.file("out")) == 0);
  CHECK(fs::exists(dir.file("out/theta.csv")));
  CHECK(fs::exists(dir.file("out/gamma.csv")));
  const auto gamma = bifuse::read_csv_matrix(dir.file("out/gamma.csv"));
  CHECK(gamma.rows() == 3);
  CHECK(gamma.cols() == 3);
}

TEST_CASE("columns-only mode leaves every row in its own cluster") {
  TempDir dir("colsonly");
  write_sim_config(dir.file("sim.json"), 20, 4, 4, 11, 0.4,
                   json{{"col_partition", {2, 2}}});
  REQUIRE(run_cli("simulate --config " + dir.file("sim.json") + " --out-dir " +
                  dir.path.string()) == 0);
  REQUIRE(run_cli("fit --x " + dir.file("X.csv") + " --y " + dir.file("Y.csv") +
                  " --formulation 1 --lambda1 0.2 --lambda2 0.4 --kappa 2"
                  " --mode columns-only --out-dir " +
                  dir.file("out")) == 0);
  const json clusters = bifuse::read_json_file(dir.file("out/clusters.json"));
  CHECK(clusters.at("n_row_clusters") == 4);
  const auto labels = clusters.at("row_labels").get<std::vector<int>>();
  CHECK(labels == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("a huge fusion penalty collapses everything to one bi-cluster") {
  TempDir dir("hugel2");
  write_sim_config(dir.file("sim.json"), 20, 3, 3, 13, 0.4);
  REQUIRE(run_cli("simulate --config " + dir.file("sim.json") + " --out-dir " +
                  dir.path.string()) == 0);
  REQUIRE(run_cli("fit --x " + dir.file("X.csv") + " --y " + dir.file("Y.csv") +
                  " --formulation 1 --lambda1 0.1 --lambda2 1e6 --kappa 2"
                  " --out-dir " +
                  dir.file("out")) == 0);
  const json clusters = bifuse::read_json_file(dir.file("out/clusters.json"));
  CHECK(clusters.at("n_row_clusters") == 1);
  CHECK(clusters.at("n_col_clusters") == 1);
}

TEST_CASE("score of the truth against itself is perfect") {
  TempDir dir("score");
  write_sim_config(dir.file("sim.json"), 10, 3, 3, 17, 0.4,
                   json{{"row_partition", {2, 1}}, {"col_partition", {2, 1}}});
  REQUIRE(run_cli("simulate --config " + dir.file("sim.json") + " --out-dir " +
                  dir.path.string()) == 0);
  REQUIRE(run_cli("score --pred " + dir.file("truth.json") + " --truth " +
                  dir.file("truth.json") + " --theta " + dir.file("theta_star.csv") +
                  " --theta-star " + dir.file("theta_star.csv") + " --x " +
                  dir.file("X.csv") + " --y " + dir.file("Y.csv") + " --out " +
                  dir.file("scores.json")) == 0);
  const json scores = bifuse::read_json_file(dir.file("scores.json"));
  for (const char* level : {"row", "column", "bicluster"}) {
    CHECK(scores.at(level).at("ari").get<double>() == doctest::Approx(1.0));
    CHECK(scores.at(level).at("f1").get<double>() == doctest::Approx(1.0));
    CHECK(scores.at(level).at("jaccard").get<double>() == doctest::Approx(1.0));
  }
  CHECK(scores.at("recovery_accuracy").get<double>() == doctest::Approx(0.0));
}

TEST_CASE("a single-point path matches the plain fit") {
  TempDir dir("path1");
  write_sim_config(dir.file("sim.json"), 16, 3, 3, 19, 0.4);
  REQUIRE(run_cli("simulate --config " + dir.file("sim.json") + " --out-dir " +
                  dir.path.string()) == 0);
  const std::string common = " --x " + dir.file("X.csv") + " --y " +
                             dir.file("Y.csv") +
                             " --formulation 1 --lambda1 0.2 --kappa 2";
  REQUIRE(run_cli("path" + common + " --grid 0.7 --out-dir " + dir.file("p")) == 0);
  REQUIRE(run_cli("fit" + common + " --lambda2 0.7 --out-dir " + dir.file("f")) == 0);
  const auto from_path = bifuse::read_csv_matrix(dir.file("p/theta_000.csv"));
  const auto from_fit = bifuse::read_csv_matrix(dir.file("f/theta.csv"));
  CHECK((from_path - from_fit).norm() <= 1e-10);
  const json path = bifuse::read_json_file(dir.file("p/path.json"));
  CHECK(path.at("points").size() == 1);
}

TEST_CASE("cv picks hyperparameters deterministically") {
  TempDir dir("cv");
  write_sim_config(dir.file("sim.json"), 30, 3, 3, 23, 0.4,
                   json{{"col_partition", {2, 1}}});
  REQUIRE(run_cli("simulate --config " + dir.file("sim.json") + " --out-dir " +
                  dir.path.string()) == 0);
  const std::string cmd = "cv --x " + dir.file("X.csv") + " --y " +
                          dir.file("Y.csv") +
                          " --formulation 1 --kappa 2 --seed 5"
                          " --lambda1-grid 0.05,0.5 --lambda2-grid 0.1,1.0 --out ";
  REQUIRE(run_cli(cmd + dir.file("cv1.json")) == 0);
  REQUIRE(run_cli(cmd + dir.file("cv2.json")) == 0);
  CHECK(slurp(dir.file("cv1.json")) == slurp(dir.file("cv2.json")));
  const json choice = bifuse::read_json_file(dir.file("cv1.json"));
  CHECK((choice.at("lambda1") == 0.05 || choice.at("lambda1") == 0.5));
}

TEST_CASE("baseline2step produces valid partitions across seeds") {
  for (uint64_t seed : {31, 32, 33}) {
    TempDir dir("base" + std::to_string(seed));
    write_sim_config(dir.file("sim.json"), 24, 4, 4, seed, 0.3,
                     json{{"row_partition", {2, 2}}, {"col_partition", {2, 2}}});
    REQUIRE(run_cli("simulate --config " + dir.file("sim.json") + " --out-dir " +
                    dir.path.string()) == 0);
    REQUIRE(run_cli("baseline2step --x " + dir.file("X.csv") + " --y " +
                    dir.file("Y.csv") +
                    " --lambda1 0.2 --nu 0.5 --kappa 2 --out-dir " +
                    dir.file("out")) == 0);
    const json clusters = bifuse::read_json_file(dir.file("out/clusters.json"));
    const auto rows = clusters.at("row_labels").get<std::vector<int>>();
    const auto cols = clusters.at("col_labels").get<std::vector<int>>();
    REQUIRE(rows.size() == 4);
    REQUIRE(cols.size() == 4);
    for (int label : rows) CHECK(label >= 0);
    for (int label : cols) CHECK(label >= 0);
    CHECK(fs::exists(dir.file("out/gamma.csv")));
  }
}

int main(int argc, char** argv) {
  if (argc > 1 && argv[1][0] != '-') {
    g_cli_path = argv[1];
    --argc;
    ++argv;
  } else if (const char* env = std::getenv("BIFUSE_CLI")) {
    g_cli_path = env;
  } else {
    std::fprintf(stderr, "usage: cli_tests <path-to-bifuse-binary> [doctest args]\n");
    return 1;
  }
  doctest::Context context(argc, argv);
  return context.run();
}
