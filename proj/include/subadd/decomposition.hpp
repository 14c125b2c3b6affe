#pragma once

// Local-neighborhood decompositions of graphical models.

#include <string>
#include <utility>
#include <vector>

#include "subadd/graph.hpp"
#include "subadd/model.hpp"

namespace subadd {

struct Provenance {
  enum class Kind { BayesParents, MaximalCliques, BfsSeparators, Truncated, Contracted };

  Kind kind = Kind::BayesParents;
  std::vector<int> order;                   // BfsSeparators
  int truncated_at = -1;                    // Truncated
  std::vector<std::pair<int, int>> merges;  // Contracted, in application order

  std::string name() const;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Ordered neighborhoods (each sorted ascending). owners[k] lists the nodes whose
/// terms neighborhood k stands for; contraction merges by owner.
struct Decomposition {
  std::vector<std::vector<int>> neighborhoods;
  std::vector<std::vector<int>> owners;
  Provenance provenance;

  std::size_t size() const { return neighborhoods.size(); }
  /// Index of the neighborhood owning `node`, or -1.
  int owner_of(int node) const;
  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

std::vector<int> topological_order(const BayesNet& bn);

Decomposition bayes_neighborhoods(const BayesNet& bn);

/// Pivoting Bron-Kerbosch; sorted by smallest member, then size, then
/// lexicographically.
Decomposition maximal_cliques(const UndirectedGraph& graph);

/// Throws NotBfsOrdering unless `order` is a breadth-first ordering of `graph`
/// (a new root may start once the earlier components are exhausted).
void check_bfs_ordering(const UndirectedGraph& graph, const std::vector<int>& order);

/// Sigma_k = (N(order_0) u ... u N(order_k)) minus {order_0..order_k}.
std::vector<std::vector<int>> bfs_separators(const UndirectedGraph& graph,
                                             const std::vector<int>& order);

/// Neighborhoods {order_k} u Sigma_k, each separation verified by reachability.
Decomposition bfs_neighborhoods(const UndirectedGraph& graph, const std::vector<int>& order);

/// Breadth-first ordering from node 0, lowest index first, restarting at the
/// lowest unvisited node for each new component.
std::vector<int> natural_bfs_order(const UndirectedGraph& graph);

/// Keeps the neighborhood of the last topological position s whose parents
/// are exactly the earlier nodes, plus everything after it.
Decomposition truncate(const BayesNet& bn, const Decomposition& dec);

/// Merges the neighborhoods owning s and s + 1.
Decomposition contract(const Decomposition& dec, int s);

}  // namespace subadd
