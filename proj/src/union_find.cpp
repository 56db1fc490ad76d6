#include "clv/union_find.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace clv {

void UnionFind::ensure(int size) {
  while (static_cast<int>(parent_.size()) < size) {
    parent_.push_back(static_cast<int>(parent_.size()));
    edges_.emplace_back();
  }
}

int UnionFind::find(int x) const {
  int root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    int next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool UnionFind::merge(int a, int b, int reason) {
  int ra = find(a), rb = find(b);
  if (ra == rb) return false;
  if (rb < ra) std::swap(ra, rb);
  parent_[rb] = ra;
  edges_[a].emplace_back(b, reason);
  edges_[b].emplace_back(a, reason);
  return true;
}

std::vector<int> UnionFind::explain(int a, int b) const {
  if (a == b) return {};
  // The edges form a forest, so the BFS path is the unique one.
  std::vector<std::pair<int, int>> via(parent_.size(), {-1, -1});
  std::vector<bool> seen(parent_.size(), false);
  std::deque<int> queue{a};
  seen[a] = true;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    if (x == b) break;
    for (const auto& [y, reason] : edges_[x]) {
      if (seen[y]) continue;
      seen[y] = true;
      via[y] = {x, reason};
      queue.push_back(y);
    }
  }
  if (!seen[b]) throw std::logic_error("explain: constants are not connected");
  std::vector<int> reasons;
  for (int x = b; x != a; x = via[x].first) reasons.push_back(via[x].second);
  std::reverse(reasons.begin(), reasons.end());
  return reasons;
}

}  // namespace clv
