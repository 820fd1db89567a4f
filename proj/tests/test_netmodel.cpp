#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "lapnet/errors.hpp"
#include "lapnet/matrixcore.hpp"
#include "lapnet/netmodel.hpp"
#include "test_util.hpp"

using namespace lapnet;
using lapnet::test::connected_by_union_find;
using Eigen::MatrixXd;

namespace {

std::vector<std::pair<int, int>> pairs_of(const NetworkGraph& g) {
  std::vector<std::pair<int, int>> out;
  for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

std::filesystem::path bundled(const char* name) {
  return std::filesystem::path(LAPNET_DATA_DIR) / "networks" / name;
}

}  // namespace

TEST_SUITE("netmodel") {

TEST_CASE("NetworkGraph invariants") {
  CHECK_THROWS_AS(NetworkGraph(3, {{0, 0, 1.0}, {1, 2, 1.0}}), DataError);
  CHECK_THROWS_AS(NetworkGraph(3, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}}), DataError);
  CHECK_THROWS_AS(NetworkGraph(4, {{0, 1, 1.0}, {2, 3, 1.0}}), DataError);
  CHECK_THROWS_AS(NetworkGraph(2, {{0, 1, -1.0}}), DataError);
  CHECK_THROWS_AS(NetworkGraph(2, {{0, 5, 1.0}}), DataError);
  const NetworkGraph g(3, {{2, 1, 1.0}, {1, 0, 2.0}});
  CHECK(g.edges()[0] == Edge{0, 1, 2.0});
  CHECK(g.edges()[1] == Edge{1, 2, 1.0});
}

TEST_CASE("Erdos-Renyi generator") {
  const NetworkGraph k4 = gen_erdos_renyi(4, 1.0, 1);
  CHECK(k4.edge_count() == 6);
  CHECK(k4.max_degree() == 3);
  const NetworkGraph two = gen_erdos_renyi(2, 1.0, 1);
  REQUIRE(two.edge_count() == 1);
  CHECK(two.edges()[0].u == 0);
  CHECK(two.edges()[0].v == 1);
  const NetworkGraph g = gen_erdos_renyi(30, 0.1, 7);
  CHECK(connected_by_union_find(30, pairs_of(g)));
  CHECK(pairs_of(gen_erdos_renyi(30, 0.1, 7)) == pairs_of(g));
  CHECK(pairs_of(gen_erdos_renyi(30, 0.1, 8)) != pairs_of(g));
  CHECK_THROWS_AS(gen_erdos_renyi(40, 0.001, 1), GenerationFailed);
  CHECK_THROWS_AS(gen_erdos_renyi(1, 0.5, 1), DataError);
  CHECK_THROWS_AS(gen_erdos_renyi(5, 0.0, 1), DataError);
}

TEST_CASE("Watts-Strogatz generator") {
  const NetworkGraph cycle = gen_watts_strogatz(6, 2, 0.0, 1);
  CHECK(cycle.edge_count() == 6);
  for (int d : cycle.degrees()) CHECK(d == 2);
  const NetworkGraph lattice = gen_watts_strogatz(30, 4, 0.0, 1);
  for (int d : lattice.degrees()) CHECK(d == 4);
  const NetworkGraph g = gen_watts_strogatz(30, 4, 0.2, 3);
  CHECK(g.edge_count() == 60);
  CHECK(connected_by_union_find(30, pairs_of(g)));
  CHECK(pairs_of(g) != pairs_of(lattice));
  CHECK(pairs_of(gen_watts_strogatz(30, 4, 0.2, 3)) == pairs_of(g));
  CHECK_THROWS_AS(gen_watts_strogatz(30, 3, 0.1, 1), DataError);
  CHECK_THROWS_AS(gen_watts_strogatz(4, 4, 0.1, 1), DataError);
}

TEST_CASE("Barabasi-Albert generator") {
  const NetworkGraph k5 = gen_barabasi_albert(5, 4, 1);
  CHECK(k5.edge_count() == 10);
  const NetworkGraph g = gen_barabasi_albert(30, 2, 1);
  CHECK(g.edge_count() == 3 + 2 * 27);
  CHECK(connected_by_union_find(30, pairs_of(g)));
  const NetworkGraph h = gen_barabasi_albert(30, 3, 5);
  // Degree histogram: every node has at least m neighbours and the hub has
  // noticeably more.
  const auto deg = h.degrees();
  for (int d : deg) CHECK(d >= 3);
  CHECK(h.max_degree() >= 3);
  CHECK(h.max_degree() > 6);
  CHECK(pairs_of(gen_barabasi_albert(30, 3, 5)) == pairs_of(h));
  CHECK_THROWS_AS(gen_barabasi_albert(3, 3, 1), DataError);
}

TEST_CASE("ring grid generator") {
  CHECK(gen_ring_grid(5).edge_count() == 10);
  const NetworkGraph g6 = gen_ring_grid(6);
  CHECK(g6.edge_count() == 12);
  for (int d : g6.degrees()) CHECK(d == 4);
  CHECK(gen_ring_grid(30).max_degree() == 4);
  CHECK_THROWS_AS(gen_ring_grid(4), DataError);
}

TEST_CASE("every generator output is connected") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(connected_by_union_find(30, pairs_of(gen_erdos_renyi(30, 0.08, seed))));
    CHECK(connected_by_union_find(30, pairs_of(gen_watts_strogatz(30, 4, 0.5, seed))));
    CHECK(connected_by_union_find(30, pairs_of(gen_barabasi_albert(30, 1, seed))));
  }
}

TEST_CASE("edge list parsing") {
  const NetworkGraph path = parse_edge_list("0,1\n1,2");
  CHECK(path.node_count() == 3);
  CHECK(path.edge_count() == 2);
  const NetworkGraph w = parse_edge_list("# header\n\n0,1,2.5\n 1 , 2 \n");
  CHECK(w.edges()[0].weight == 2.5);
  CHECK(w.edges()[1].weight == 1.0);

  auto parse_line = [](const std::string& text) -> std::size_t {
    try {
      parse_edge_list(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(parse_line("0,1\n1,x\n") == 2);
  CHECK(parse_line("0,1\n\n1,2,0\n") == 3);
  CHECK(parse_line("0,1\n1,1\n") == 2);
  CHECK(parse_line("0,1\n1,0\n") == 2);
  CHECK(parse_line("0,1,2,3\n") == 1);
  CHECK_THROWS_AS(parse_edge_list("0,1\n2,3\n"), DataError);
  CHECK_THROWS_AS(parse_edge_list("0,1\n1,3\n"), DataError);
  CHECK_THROWS_AS(parse_edge_list("# nothing\n"), DataError);
}

TEST_CASE("edge list round trip") {
  const NetworkGraph g = gen_erdos_renyi(12, 0.3, 4).with_uniform_weights(0.5, 2.0, 9);
  const NetworkGraph back = parse_edge_list(format_edge_list(g));
  CHECK(back.edges() == g.edges());
}

TEST_CASE("bundled benchmark networks") {
  const NetworkGraph ieee = load_edge_list(bundled("ieee33.csv"));
  CHECK(ieee.node_count() == 33);
  CHECK(ieee.edge_count() == 32);
  CHECK(ieee.max_degree() == 3);
  const NetworkGraph water = load_edge_list(bundled("water121.csv"));
  CHECK(water.node_count() == 121);
  CHECK(water.edge_count() == 162);
  CHECK(water.max_degree() == 6);
  CHECK_THROWS_AS(load_edge_list(bundled("missing.csv")), Error);
}

TEST_CASE("ground truth from adjacency") {
  const NetworkGraph edge(2, {{0, 1, 1.0}});
  const GroundTruth t = ground_truth_from_adjacency(edge, 0.5);
  MatrixXd expect(2, 2);
  expect << 1.5, 1, 1, 1.5;
  CHECK(t.laplacian.isApprox(expect));
  const auto ev = sym_eigenvalues(t.laplacian);
  CHECK(ev(0) == doctest::Approx(0.5));
  CHECK(ev(1) == doctest::Approx(2.5));

  const GroundTruth k4 = ground_truth_from_adjacency(gen_erdos_renyi(4, 1.0, 1), 0.5);
  CHECK(k4.laplacian(0, 0) == doctest::Approx(1.5));
  CHECK(k4.max_degree == 3);

  const NetworkGraph water = load_edge_list(bundled("water121.csv"));
  const GroundTruth tw = ground_truth_from_adjacency(water, 0.5);
  CHECK(tw.support.size() == 162);
  CHECK(chol_or_min_eig(tw.laplacian).positive_definite);
  CHECK_THROWS_AS(ground_truth_from_adjacency(water, 0.0), DataError);
}

TEST_CASE("smallest eigenvalue of A + eps I equals the margin") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const NetworkGraph g = gen_erdos_renyi(25, 0.15, seed);
    for (double margin : {0.1, 0.5, 2.0}) {
      const GroundTruth t = ground_truth_from_adjacency(g, margin);
      CHECK(std::abs(sym_eigenvalues(t.laplacian)(0) - margin) <= 1e-9);
      CHECK(t.support == g.support());
      CHECK(t.max_degree == g.max_degree());
    }
  }
}

TEST_CASE("reduced Laplacian") {
  const NetworkGraph path(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  CHECK(path.laplacian().isApprox(
      (MatrixXd(3, 3) << 1, -1, 0, -1, 2, -1, 0, -1, 1).finished()));
  const GroundTruth r = reduced_laplacian(path);
  CHECK(r.laplacian.isApprox((MatrixXd(2, 2) << 2, -1, -1, 1).finished()));
  const auto ev = sym_eigenvalues(r.laplacian);
  CHECK(ev(0) == doctest::Approx((3 - std::sqrt(5.0)) / 2));
  CHECK(ev(1) == doctest::Approx((3 + std::sqrt(5.0)) / 2));

  const NetworkGraph star(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  const GroundTruth s = reduced_laplacian(star);
  CHECK(s.laplacian == MatrixXd::Identity(3, 3));
  CHECK(s.support.empty());
  CHECK(s.max_degree == 0);
}

TEST_CASE("reduced Laplacian is PD on 50 random connected graphs") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_index(48));
    const NetworkGraph g =
        gen_erdos_renyi(n, std::min(1.0, 4.0 / n), rng.next_u64())
            .with_uniform_weights(0.5, 1.5, rng.next_u64());
    const GroundTruth r = reduced_laplacian(g);
    CHECK(r.laplacian.rows() == n - 1);
    CHECK(sym_eigenvalues(r.laplacian)(0) > 0.0);
    // Support: edges among nodes 1..n-1, shifted down by one.
    std::size_t inner = 0;
    for (const Edge& e : g.edges())
      if (e.u != 0) {
        ++inner;
        CHECK(r.support.contains(e.u - 1, e.v - 1));
      }
    CHECK(r.support.size() == inner);
  }
}

TEST_CASE("grounded Laplacian") {
  const NetworkGraph g = gen_ring_grid(30);
  const GroundTruth t = grounded_laplacian(g, 0.5);
  CHECK(sym_eigenvalues(t.laplacian)(0) == doctest::Approx(0.5));
  CHECK(t.support == g.support());
  CHECK(t.max_degree == 4);
  CHECK(t.laplacian(0, 0) == doctest::Approx(4.5));
  CHECK(t.laplacian(0, 1) == -1.0);
}

TEST_CASE("weights are drawn in range and deterministically") {
  const NetworkGraph g = gen_ring_grid(10);
  const NetworkGraph a = g.with_uniform_weights(0.5, 2.0, 3);
  const NetworkGraph b = g.with_uniform_weights(0.5, 2.0, 3);
  CHECK(a.edges() == b.edges());
  for (const Edge& e : a.edges()) {
    CHECK(e.weight >= 0.5);
    CHECK(e.weight <= 2.0);
  }
}

}  // TEST_SUITE
