#pragma once

// Undirected network models and the ground-truth matrices built from them.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lapnet/support.hpp"

namespace lapnet {

struct Edge {
  int u = 0;  ///< u < v after construction.
  int v = 0;
  double weight = 1.0;

  bool operator==(const Edge&) const = default;
};

/// Connected simple undirected graph with positive edge weights. The
/// constructor normalizes edges to u < v, sorts them and rejects self-loops,
/// duplicates, non-positive weights, out-of-range ids and disconnected input
/// (all DataError).
class NetworkGraph {
 public:
  NetworkGraph(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::vector<int> degrees() const;
  int max_degree() const;
  SupportSet support() const;

  Eigen::MatrixXd adjacency() const;
  /// Full Laplacian D - A (singular).
  Eigen::MatrixXd laplacian() const;

  /// Same topology with every weight drawn uniformly from [lo, hi].
  NetworkGraph with_uniform_weights(double lo, double hi,
                                    std::uint64_t seed) const;

 private:
  int node_count_;
  std::vector<Edge> edges_;
};

/// Breadth-first search over an edge list; used for every connectivity check.
bool is_connected(int node_count, const std::vector<Edge>& edges);

NetworkGraph gen_erdos_renyi(int p, double edge_prob, std::uint64_t seed);
NetworkGraph gen_watts_strogatz(int p, int ring_neighbors, double rewire_prob,
                                std::uint64_t seed);
NetworkGraph gen_barabasi_albert(int p, int attach_count, std::uint64_t seed);
/// Circulant graph with offsets {1, 2}.
NetworkGraph gen_ring_grid(int p);

/// `u,v` or `u,v,w` per line; '#' comments and blank lines skipped. Node ids
/// must be exactly 0..p-1.
NetworkGraph parse_edge_list(const std::string& text);
NetworkGraph load_edge_list(const std::filesystem::path& path);
std::string format_edge_list(const NetworkGraph& g);
void write_edge_list(const std::filesystem::path& path, const NetworkGraph& g);

struct GroundTruth {
  Eigen::MatrixXd laplacian;
  SupportSet support;
  int max_degree = 0;
};

/// Builds support and degree from the off-diagonal pattern of a PD matrix.
/// Throws NotPositiveDefinite if `m` is not PD.
GroundTruth ground_truth_from_matrix(const Eigen::MatrixXd& m);

/// L* = A + eps I with eps = |lambda_min(A)| + eps_margin.
GroundTruth ground_truth_from_adjacency(const NetworkGraph& g,
                                        double eps_margin);

/// Full Laplacian with row and column 0 removed (p = node_count - 1).
GroundTruth reduced_laplacian(const NetworkGraph& g);

/// Laplacian plus shunt * I: the reduced Laplacian of g augmented with an
/// extra ground node tied to every node by an edge of weight `shunt`.
GroundTruth grounded_laplacian(const NetworkGraph& g, double shunt);

}  // namespace lapnet
