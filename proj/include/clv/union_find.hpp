#pragma once

#include <vector>

namespace clv {

/// Union-find over dense ids where the representative of a class is always
/// its smallest (oldest) id, so the partition and the representatives do not
/// depend on merge order. Every merge is recorded as an edge labelled with a
/// caller-supplied reason, which `explain` uses to justify a ~ b.
class UnionFind {
 public:
  void ensure(int size);
  int size() const { return static_cast<int>(parent_.size()); }

  int find(int x) const;
  bool same(int a, int b) const { return find(a) == find(b); }

  /// Returns false when a and b were already in the same class.
  bool merge(int a, int b, int reason);

  /// Reasons of the edges on the path from a to b, in path order. Empty when
  /// a == b; throws std::logic_error when a and b are not connected.
  std::vector<int> explain(int a, int b) const;

 private:
  mutable std::vector<int> parent_;
  std::vector<std::vector<std::pair<int, int>>> edges_;  // (neighbour, reason)
};

}  // namespace clv
