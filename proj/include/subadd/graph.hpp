#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace subadd {

/// Simple undirected graph on nodes 0..n-1, n <= 64, stored as adjacency bitmasks.
class UndirectedGraph {
 public:
  using Mask = std::uint64_t;
  static constexpr int kMaxNodes = 64;

  UndirectedGraph() = default;
  explicit UndirectedGraph(int n);
  UndirectedGraph(int n, const std::vector<std::pair<int, int>>& edges);

  int size() const { return n_; }
  void add_edge(int u, int v);
  bool adjacent(int u, int v) const { return (adj_[u] >> v) & 1u; }
  Mask neighbors(int u) const { return adj_[u]; }
  std::vector<int> neighbor_list(int u) const;
  std::vector<std::pair<int, int>> edges() const;
  bool is_clique(const std::vector<int>& nodes) const;

  /// Nodes reachable from `sources` without entering `blocked`.
  Mask reachable(Mask sources, Mask blocked) const;

  friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

 private:
  int n_ = 0;
  std::vector<Mask> adj_;
};

inline UndirectedGraph::Mask bit(int i) { return UndirectedGraph::Mask{1} << i; }
UndirectedGraph::Mask to_mask(const std::vector<int>& nodes);
std::vector<int> from_mask(UndirectedGraph::Mask mask);

}  // namespace subadd
