#include "subadd/graph.hpp"

#include <bit>

#include "subadd/error.hpp"

namespace subadd {

UndirectedGraph::UndirectedGraph(int n) : n_(n), adj_(static_cast<std::size_t>(n), 0) {
  if (n < 0 || n > kMaxNodes) {
    fail(ErrorKind::InvalidArgument, "graph size must be in [0, 64]");
  }
}

UndirectedGraph::UndirectedGraph(int n, const std::vector<std::pair<int, int>>& edges)
    : UndirectedGraph(n) {
  for (auto [u, v] : edges) add_edge(u, v);
}

void UndirectedGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) {
    fail(ErrorKind::IndexOutOfRange, "edge endpoint out of range");
  }
  if (u == v) return;
  adj_[u] |= bit(v);
  adj_[v] |= bit(u);
}

std::vector<int> UndirectedGraph::neighbor_list(int u) const { return from_mask(adj_[u]); }

std::vector<std::pair<int, int>> UndirectedGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      if (adjacent(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

bool UndirectedGraph::is_clique(const std::vector<int>& nodes) const {
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (!adjacent(nodes[a], nodes[b])) return false;
    }
  }
  return true;
}

UndirectedGraph::Mask UndirectedGraph::reachable(Mask sources, Mask blocked) const {
  Mask seen = sources & ~blocked;
  Mask frontier = seen;
  while (frontier != 0) {
    Mask next = 0;
    for (Mask f = frontier; f != 0; f &= f - 1) {
      next |= adj_[std::countr_zero(f)];
    }
    next &= ~blocked & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

UndirectedGraph::Mask to_mask(const std::vector<int>& nodes) {
  UndirectedGraph::Mask m = 0;
  for (int v : nodes) m |= bit(v);
  return m;
}

std::vector<int> from_mask(UndirectedGraph::Mask mask) {
  std::vector<int> out;
  for (; mask != 0; mask &= mask - 1) out.push_back(std::countr_zero(mask));
  return out;
}

}  // namespace subadd
