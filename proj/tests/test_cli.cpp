#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "lapnet/io.hpp"

using namespace lapnet;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "lapnet_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(LAPNET_BIN) + " " + args + " > " +
                          (workdir() / "stdout.txt").string() + " 2> " +
                          (workdir() / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve on the identity returns the identity") {
  write_matrix_csv(path("I5.csv"), Eigen::MatrixXd::Identity(5, 5));
  REQUIRE(run("solve --cov " + path("I5.csv") + " --lambda 0.5 --out " + path("L5.csv") +
              " --report " + path("r5.json")) == 0);
  CHECK((read_matrix_csv(path("L5.csv")) - Eigen::MatrixXd::Identity(5, 5)).norm() <= 1e-8);
  const auto rep = nlohmann::json::parse(read_file(path("r5.json")));
  CHECK(rep.at("converged").get<bool>());
}

TEST_CASE("mle on a diagonal covariance") {
  write_matrix_csv(path("D.csv"), Eigen::Vector2d(4, 9).asDiagonal().toDenseMatrix());
  REQUIRE(run("mle --cov " + path("D.csv") + " --out " + path("Dm.csv")) == 0);
  const Eigen::MatrixXd l = read_matrix_csv(path("Dm.csv"));
  CHECK(l(0, 0) == doctest::Approx(0.5));
  CHECK(l(1, 1) == doctest::Approx(1.0 / 3.0));
  REQUIRE(run("mle --cov " + path("D.csv") + " --sigma2 4 --out " + path("Dm4.csv")) == 0);
  CHECK(read_matrix_csv(path("Dm4.csv"))(0, 0) == doctest::Approx(0.25));
}

TEST_CASE("errors exit nonzero with a one-line diagnostic") {
  CHECK(run("solve --cov " + path("missing.csv") + " --lambda 0.1 --out " + path("x.csv")) != 0);
  write_file_atomic(path("bad.csv"), "1,2\n3\n");
  CHECK(run("solve --cov " + path("bad.csv") + " --lambda 0.1 --out " + path("x.csv")) == 1);
  const std::string err = read_file(path("stderr.txt"));
  CHECK(err.rfind("lapnet: error:", 0) == 0);
  CHECK(std::count(err.begin(), err.end(), '\n') == 1);
  CHECK_FALSE(fs::exists(path("x.csv")));
  write_matrix_csv(path("ns.csv"), (Eigen::MatrixXd(2, 2) << 1, 2, 0, 1).finished());
  CHECK(run("mle --cov " + path("ns.csv") + " --out " + path("x.csv")) == 1);
  CHECK(run("bogus") != 0);
}

TEST_CASE("generate, simulate, solve and evaluate pipeline") {
  REQUIRE(run("generate --model er --nodes 20 --prob 0.2 --seed 7 --out " + path("g.csv")) == 0);
  REQUIRE(run("simulate --graph " + path("g.csv") +
              " --truth grounded --samples 400 --seed 11 --cov-out " + path("S.csv") +
              " --truth-out " + path("Lstar.csv")) == 0);
  REQUIRE(run("solve --cov " + path("S.csv") + " --lambda 0.556 --rho 1.0 --out " +
              path("L.csv") + " --report " + path("report.json")) == 0);
  REQUIRE(run("evaluate --estimate " + path("L.csv") + " --truth " + path("Lstar.csv") +
              " --threshold 0.01 --out " + path("score.json")) == 0);
  const auto score = nlohmann::json::parse(read_file(path("score.json")));
  CHECK(score.at("f_score").get<double>() > 0.7);
  const auto report = nlohmann::json::parse(read_file(path("report.json")));
  CHECK(report.at("kkt_violation").get<double>() <= 1e-4);
}

TEST_CASE("sweep from a config file") {
  write_file_atomic(path("exp.json"), R"({
    "network": {"kind": "grid", "p": 10, "truth": "grounded"},
    "tau_list": [1],
    "lambda_grid": [0.2],
    "n_instances": 2,
    "out_dir": ")" + path("out") + R"("
  })");
  REQUIRE(run("sweep --config " + path("exp.json") + " --jobs 2") == 0);
  CHECK(fs::exists(workdir() / "out" / "trials.csv"));
  CHECK(fs::exists(workdir() / "out" / "sweep.csv"));
}

}  // TEST_SUITE
