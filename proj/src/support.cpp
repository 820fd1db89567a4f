#include "lapnet/support.hpp"

#include <algorithm>
#include <string>

#include "lapnet/errors.hpp"

namespace lapnet {

SupportSet::SupportSet(int dim, std::vector<Pair> pairs) : dim_(dim) {
  for (auto& [i, j] : pairs) {
    if (i == j) throw DataError("SupportSet: diagonal pair (" + std::to_string(i) + ")");
    if (i < 0 || j < 0 || i >= dim || j >= dim)
      throw DataError("SupportSet: pair (" + std::to_string(i) + "," +
                      std::to_string(j) + ") out of range for dim " +
                      std::to_string(dim));
    if (i > j) std::swap(i, j);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  pairs_ = std::move(pairs);
}

bool SupportSet::contains(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(pairs_.begin(), pairs_.end(), Pair{i, j});
}

int SupportSet::max_degree() const {
  std::vector<int> deg(static_cast<std::size_t>(dim_), 0);
  for (const auto& [i, j] : pairs_) {
    ++deg[static_cast<std::size_t>(i)];
    ++deg[static_cast<std::size_t>(j)];
  }
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

}  // namespace lapnet
