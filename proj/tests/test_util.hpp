#pragma once

// Helpers shared by the unit tests. Reference computations here are written
// independently of the library code they check.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lapnet/rng.hpp"

namespace lapnet::test {

inline Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

inline Eigen::MatrixXd random_symmetric(Rng& rng, int p) {
  Eigen::MatrixXd a = random_matrix(rng, p, p);
  return (a + a.transpose()) / 2.0;
}

/// G G^T / p + shift I.
inline Eigen::MatrixXd random_spd(Rng& rng, int p, double shift = 0.5) {
  Eigen::MatrixXd g = random_matrix(rng, p, p);
  Eigen::MatrixXd s = g * g.transpose() / double(p);
  s.diagonal().array() += shift;
  return (s + s.transpose()) / 2.0;
}

inline double rel_frob(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1e-300, b.norm());
}

/// Connectivity by union-find (independent of the library's BFS).
inline bool connected_by_union_find(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  int components = n;
  for (auto [u, v] : edges) {
    const int a = find(u), b = find(v);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace lapnet::test
