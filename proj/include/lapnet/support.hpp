#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace lapnet {

/// Unordered off-diagonal index pairs (i, j), stored with i < j, sorted.
class SupportSet {
 public:
  using Pair = std::pair<int, int>;

  SupportSet() = default;
  explicit SupportSet(int dim) : dim_(dim) {}
  /// Normalizes (i, j) to i < j, rejects diagonal and out-of-range pairs
  /// (DataError) and drops duplicates.
  SupportSet(int dim, std::vector<Pair> pairs);

  int dim() const { return dim_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::vector<Pair>& pairs() const { return pairs_; }
  bool contains(int i, int j) const;

  /// Max over nodes of the number of incident pairs.
  int max_degree() const;

  bool operator==(const SupportSet&) const = default;

 private:
  int dim_ = 0;
  std::vector<Pair> pairs_;
};

}  // namespace lapnet
