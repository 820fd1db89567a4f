#include "lapnet/netmodel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include "lapnet/errors.hpp"
#include "lapnet/io.hpp"
#include "lapnet/matrixcore.hpp"
#include "lapnet/rng.hpp"

namespace lapnet {

namespace {

constexpr int kMaxGenerationAttempts = 1000;

std::string edge_str(int u, int v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

}  // namespace

bool is_connected(int node_count, const std::vector<Edge>& edges) {
  if (node_count <= 0) return false;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(node_count));
  for (const Edge& e : edges) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<char> seen(static_cast<std::size_t>(node_count), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++visited;
        q.push(v);
      }
    }
  }
  return visited == node_count;
}

NetworkGraph::NetworkGraph(int node_count, std::vector<Edge> edges)
    : node_count_(node_count) {
  if (node_count < 1) throw DataError("NetworkGraph: node_count must be >= 1");
  for (Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count)
      throw DataError("NetworkGraph: edge " + edge_str(e.u, e.v) +
                      " has a node id outside 0.." +
                      std::to_string(node_count - 1));
    if (e.u == e.v)
      throw DataError("NetworkGraph: self-loop at node " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw DataError("NetworkGraph: edge " + edge_str(e.u, e.v) +
                      " has non-positive weight");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].u == edges[k - 1].u && edges[k].v == edges[k - 1].v)
      throw DataError("NetworkGraph: duplicate edge " +
                      edge_str(edges[k].u, edges[k].v));
  }
  if (!is_connected(node_count, edges))
    throw DataError("NetworkGraph: graph on " + std::to_string(node_count) +
                    " nodes is not connected");
  edges_ = std::move(edges);
}

std::vector<int> NetworkGraph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(node_count_), 0);
  for (const Edge& e : edges_) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  return deg;
}

int NetworkGraph::max_degree() const {
  const auto deg = degrees();
  return *std::max_element(deg.begin(), deg.end());
}

SupportSet NetworkGraph::support() const {
  std::vector<SupportSet::Pair> pairs;
  pairs.reserve(edges_.size());
  for (const Edge& e : edges_) pairs.emplace_back(e.u, e.v);
  return SupportSet(node_count_, std::move(pairs));
}

Eigen::MatrixXd NetworkGraph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(node_count_, node_count_);
  for (const Edge& e : edges_) {
    a(e.u, e.v) = e.weight;
    a(e.v, e.u) = e.weight;
  }
  return a;
}

Eigen::MatrixXd NetworkGraph::laplacian() const {
  Eigen::MatrixXd a = adjacency();
  Eigen::MatrixXd l = -a;
  l.diagonal() = a.rowwise().sum();
  return l;
}

NetworkGraph NetworkGraph::with_uniform_weights(double lo, double hi,
                                                std::uint64_t seed) const {
  if (!(lo > 0.0) || !(hi >= lo))
    throw DataError("with_uniform_weights: need 0 < lo <= hi");
  Rng rng(seed);
  std::vector<Edge> edges = edges_;
  for (Edge& e : edges) e.weight = rng.uniform(lo, hi);
  return NetworkGraph(node_count_, std::move(edges));
}

NetworkGraph gen_erdos_renyi(int p, double edge_prob, std::uint64_t seed) {
  if (p < 2) throw DataError("gen_erdos_renyi: p must be >= 2");
  if (!(edge_prob > 0.0 && edge_prob <= 1.0))
    throw DataError("gen_erdos_renyi: edge_prob must lie in (0, 1]");
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (rng.bernoulli(edge_prob)) edges.push_back({i, j, 1.0});
    if (is_connected(p, edges)) return NetworkGraph(p, std::move(edges));
  }
  throw GenerationFailed("gen_erdos_renyi: no connected graph in " +
                         std::to_string(kMaxGenerationAttempts) +
                         " attempts (p=" + std::to_string(p) +
                         ", edge_prob=" + format_double(edge_prob) + ")");
}

NetworkGraph gen_watts_strogatz(int p, int ring_neighbors, double rewire_prob,
                                std::uint64_t seed) {
  const int k = ring_neighbors;
  if (k < 2 || k % 2 != 0 || p <= k)
    throw DataError("gen_watts_strogatz: need p > k >= 2 with k even");
  if (!(rewire_prob >= 0.0 && rewire_prob <= 1.0))
    throw DataError("gen_watts_strogatz: rewire_prob must lie in [0, 1]");
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    std::set<std::pair<int, int>> present;
    auto key = [](int a, int b) { return std::pair(std::min(a, b), std::max(a, b)); };
    for (int j = 1; j <= k / 2; ++j)
      for (int i = 0; i < p; ++i) present.insert(key(i, (i + j) % p));
    // Rewire each lattice edge (i, i+j) by moving its far end.
    for (int j = 1; j <= k / 2; ++j) {
      for (int i = 0; i < p; ++i) {
        const int v = (i + j) % p;
        if (!rng.bernoulli(rewire_prob)) continue;
        if (present.count(key(i, v)) == 0) continue;
        int w = i;
        // A node adjacent to everything cannot be rewired.
        int guard = 0;
        do {
          w = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(p)));
        } while ((w == i || present.count(key(i, w)) != 0) && ++guard < 64 * p);
        if (w == i || present.count(key(i, w)) != 0) continue;
        present.erase(key(i, v));
        present.insert(key(i, w));
      }
    }
    std::vector<Edge> edges;
    edges.reserve(present.size());
    for (const auto& [a, b] : present) edges.push_back({a, b, 1.0});
    if (is_connected(p, edges)) return NetworkGraph(p, std::move(edges));
  }
  throw GenerationFailed("gen_watts_strogatz: no connected graph in " +
                         std::to_string(kMaxGenerationAttempts) + " attempts");
}

NetworkGraph gen_barabasi_albert(int p, int attach_count, std::uint64_t seed) {
  const int m = attach_count;
  if (m < 1 || p <= m)
    throw DataError("gen_barabasi_albert: need p > m >= 1");
  Rng rng(seed);
  std::vector<Edge> edges;
  // Each node appears once per incident edge: uniform draws from this list
  // are degree-proportional.
  std::vector<int> endpoints;
  for (int i = 0; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) {
      edges.push_back({i, j, 1.0});
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  for (int v = m + 1; v < p; ++v) {
    std::vector<int> targets;
    while (static_cast<int>(targets.size()) < m) {
      const int t = endpoints[rng.uniform_index(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end())
        targets.push_back(t);
    }
    for (int t : targets) {
      edges.push_back({t, v, 1.0});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return NetworkGraph(p, std::move(edges));
}

NetworkGraph gen_ring_grid(int p) {
  if (p < 5) throw DataError("gen_ring_grid: p must be >= 5");
  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < p; ++i)
    for (int off : {1, 2}) {
      const int j = (i + off) % p;
      pairs.insert({std::min(i, j), std::max(i, j)});
    }
  std::vector<Edge> edges;
  for (const auto& [a, b] : pairs) edges.push_back({a, b, 1.0});
  return NetworkGraph(p, std::move(edges));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

int parse_id(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
    throw ParseError("edge list line " + std::to_string(line) +
                         ": bad node id '" + std::string(cell) + "'",
                     line);
  if (v < 0)
    throw ParseError("edge list line " + std::to_string(line) +
                         ": negative node id " + std::to_string(v),
                     line);
  return v;
}

double parse_weight(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  double w = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), w);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
    throw ParseError("edge list line " + std::to_string(line) +
                         ": bad weight '" + std::string(cell) + "'",
                     line);
  if (!(w > 0.0) || !std::isfinite(w))
    throw ParseError("edge list line " + std::to_string(line) +
                         ": weight must be positive",
                     line);
  return w;
}

}  // namespace

NetworkGraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> seen;
  int max_id = -1;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      cells.push_back(s.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 2 && cells.size() != 3)
      throw ParseError("edge list line " + std::to_string(line) +
                           ": expected 'u,v' or 'u,v,w'",
                       line);
    Edge e{parse_id(cells[0], line), parse_id(cells[1], line), 1.0};
    if (cells.size() == 3) e.weight = parse_weight(cells[2], line);
    if (e.u == e.v)
      throw ParseError("edge list line " + std::to_string(line) +
                           ": self-loop at node " + std::to_string(e.u),
                       line);
    if (!seen.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second)
      throw ParseError("edge list line " + std::to_string(line) +
                           ": duplicate edge " + edge_str(e.u, e.v),
                       line);
    max_id = std::max({max_id, e.u, e.v});
    edges.push_back(e);
  }
  if (edges.empty()) throw DataError("edge list has no edges");
  const int p = max_id + 1;
  std::vector<char> used(static_cast<std::size_t>(p), 0);
  for (const Edge& e : edges) used[e.u] = used[e.v] = 1;
  for (int i = 0; i < p; ++i)
    if (!used[static_cast<std::size_t>(i)])
      throw DataError("edge list: node ids are not dense, node " +
                      std::to_string(i) + " never appears");
  return NetworkGraph(p, std::move(edges));
}

NetworkGraph load_edge_list(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_edge_list(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_edge_list(const NetworkGraph& g) {
  std::string out;
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.u) + "," + std::to_string(e.v);
    if (e.weight != 1.0) out += "," + format_double(e.weight);
    out += "\n";
  }
  return out;
}

void write_edge_list(const std::filesystem::path& path, const NetworkGraph& g) {
  write_file_atomic(path, format_edge_list(g));
}

GroundTruth ground_truth_from_matrix(const Eigen::MatrixXd& m) {
  const auto check = chol_or_min_eig(m);
  if (!check.positive_definite)
    throw NotPositiveDefinite("ground truth matrix is not positive definite",
                              check.min_eigenvalue);
  const int p = static_cast<int>(m.rows());
  std::vector<SupportSet::Pair> pairs;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (m(i, j) != 0.0) pairs.emplace_back(i, j);
  GroundTruth t{m, SupportSet(p, std::move(pairs)), 0};
  t.max_degree = t.support.max_degree();
  return t;
}

GroundTruth ground_truth_from_adjacency(const NetworkGraph& g,
                                        double eps_margin) {
  if (!(eps_margin > 0.0))
    throw DataError("ground_truth_from_adjacency: eps_margin must be > 0");
  const Eigen::MatrixXd a = g.adjacency();
  const double lmin = sym_eigenvalues(a)(0);
  const double eps = std::abs(lmin) + eps_margin;
  Eigen::MatrixXd l = a;
  l.diagonal().array() += eps;
  return ground_truth_from_matrix(l);
}

GroundTruth reduced_laplacian(const NetworkGraph& g) {
  const int n = g.node_count();
  if (n < 2) throw DataError("reduced_laplacian: need at least 2 nodes");
  const Eigen::MatrixXd full = g.laplacian();
  return ground_truth_from_matrix(full.bottomRightCorner(n - 1, n - 1));
}

GroundTruth grounded_laplacian(const NetworkGraph& g, double shunt) {
  if (!(shunt > 0.0)) throw DataError("grounded_laplacian: shunt must be > 0");
  Eigen::MatrixXd l = g.laplacian();
  l.diagonal().array() += shunt;
  return ground_truth_from_matrix(l);
}

}  // namespace lapnet
