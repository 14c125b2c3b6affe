#include "subadd/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "subadd/error.hpp"

namespace subadd {

namespace {

using Mask = UndirectedGraph::Mask;

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void bron_kerbosch(const UndirectedGraph& g, Mask r, Mask p, Mask x, std::vector<Mask>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  // pivot: the vertex of P u X with the most neighbors in P
  int pivot = -1;
  int best = -1;
  for (Mask px = p | x; px != 0; px &= px - 1) {
    const int u = std::countr_zero(px);
    const int count = std::popcount(p & g.neighbors(u));
    if (count > best) {
      best = count;
      pivot = u;
    }
  }
  for (Mask cand = p & ~g.neighbors(pivot); cand != 0; cand &= cand - 1) {
    const int v = std::countr_zero(cand);
    bron_kerbosch(g, r | bit(v), p & g.neighbors(v), x & g.neighbors(v), out);
    p &= ~bit(v);
    x |= bit(v);
  }
}

void check_node(const UndirectedGraph& g, int v) {
  if (v < 0 || v >= g.size()) {
    fail(ErrorKind::IndexOutOfRange, "node " + std::to_string(v) + " is outside the graph");
  }
}

}  // namespace

std::string Provenance::name() const {
  switch (kind) {
    case Kind::BayesParents: return "parents";
    case Kind::MaximalCliques: return "cliques";
    case Kind::BfsSeparators: return "bfs";
    case Kind::Truncated: return "truncated";
    case Kind::Contracted: return "contracted";
  }
  return "unknown";
}

int Decomposition::owner_of(int node) const {
  for (std::size_t k = 0; k < owners.size(); ++k) {
    if (std::find(owners[k].begin(), owners[k].end(), node) != owners[k].end()) {
      return static_cast<int>(k);
    }
  }
  return -1;
}

std::vector<int> topological_order(const BayesNet& bn) {
  return detail::topological_order(bn.all_parents());
}

Decomposition bayes_neighborhoods(const BayesNet& bn) {
  Decomposition dec;
  dec.provenance.kind = Provenance::Kind::BayesParents;
  for (std::size_t i = 0; i < bn.size(); ++i) {
    std::vector<int> hood = bn.parents(i);
    hood.push_back(static_cast<int>(i));
    std::sort(hood.begin(), hood.end());
    dec.neighborhoods.push_back(std::move(hood));
    dec.owners.push_back({static_cast<int>(i)});
  }
  return dec;
}

Decomposition maximal_cliques(const UndirectedGraph& graph) {
  std::vector<Mask> found;
  const Mask all = graph.size() == 64 ? ~Mask{0} : (bit(graph.size()) - 1);
  if (graph.size() > 0) bron_kerbosch(graph, 0, all, 0, found);
  std::vector<std::vector<int>> cliques;
  cliques.reserve(found.size());
  for (Mask m : found) cliques.push_back(from_mask(m));
  std::sort(cliques.begin(), cliques.end(), [](const auto& a, const auto& b) {
    if (a.front() != b.front()) return a.front() < b.front();
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  Decomposition dec;
  dec.provenance.kind = Provenance::Kind::MaximalCliques;
  dec.owners.assign(cliques.size(), {});
  dec.neighborhoods = std::move(cliques);
  return dec;
}

void check_bfs_ordering(const UndirectedGraph& graph, const std::vector<int>& order) {
  const int n = graph.size();
  if (static_cast<int>(order.size()) != n) {
    fail(ErrorKind::NotBfsOrdering, "ordering must list every node exactly once");
  }
  std::vector<int> position(n, -1);
  for (int k = 0; k < n; ++k) {
    check_node(graph, order[k]);
    if (position[order[k]] >= 0) {
      fail(ErrorKind::NotBfsOrdering, "node " + std::to_string(order[k]) + " appears twice");
    }
    position[order[k]] = k;
  }
  Mask visited = 0;
  Mask frontier = 0;  // unvisited neighbors of visited nodes
  int last_parent = -1;
  for (int k = 0; k < n; ++k) {
    const int v = order[k];
    int parent = -1;
    for (int u : graph.neighbor_list(v)) {
      if (position[u] < k && (parent < 0 || position[u] < parent)) parent = position[u];
    }
    if (parent < 0) {
      if (frontier != 0) {
        fail(ErrorKind::NotBfsOrdering, "node " + std::to_string(v) +
                                            " starts a new search before the current one ends");
      }
    } else if (parent < last_parent) {
      fail(ErrorKind::NotBfsOrdering,
           "node " + std::to_string(v) + " is discovered out of breadth-first layer order");
    } else {
      last_parent = parent;
    }
    visited |= bit(v);
    frontier = (frontier | graph.neighbors(v)) & ~visited;
  }
}

std::vector<std::vector<int>> bfs_separators(const UndirectedGraph& graph,
                                             const std::vector<int>& order) {
  std::vector<std::vector<int>> out;
  Mask seen = 0;
  Mask hood = 0;
  for (int v : order) {
    check_node(graph, v);
    seen |= bit(v);
    hood |= graph.neighbors(v);
    out.push_back(from_mask(hood & ~seen));
  }
  return out;
}

Decomposition bfs_neighborhoods(const UndirectedGraph& graph, const std::vector<int>& order) {
  check_bfs_ordering(graph, order);
  const auto separators = bfs_separators(graph, order);
  const int n = graph.size();
  const Mask all = n == 64 ? ~Mask{0} : (bit(n) - 1);
  Decomposition dec;
  dec.provenance.kind = Provenance::Kind::BfsSeparators;
  dec.provenance.order = order;
  Mask processed = 0;
  for (int k = 0; k < n; ++k) {
    processed |= bit(order[k]);
    const Mask sigma = to_mask(separators[k]);
    const Mask rest = all & ~processed & ~sigma;
    if (graph.reachable(processed & ~sigma, sigma) & rest) {
      fail(ErrorKind::SeparationViolated,
           "separator " + std::to_string(k) + " does not split processed nodes from the rest");
    }
    std::vector<int> hood = separators[k];
    hood.push_back(order[k]);
    std::sort(hood.begin(), hood.end());
    dec.neighborhoods.push_back(std::move(hood));
    dec.owners.push_back({order[k]});
  }
  return dec;
}

std::vector<int> natural_bfs_order(const UndirectedGraph& graph) {
  const int n = graph.size();
  std::vector<int> order;
  Mask visited = 0;
  for (int root = 0; root < n; ++root) {
    if (visited & bit(root)) continue;
    visited |= bit(root);
    std::size_t head = order.size();
    order.push_back(root);
    while (head < order.size()) {
      const int v = order[head++];
      for (Mask next = graph.neighbors(v) & ~visited; next != 0; next &= next - 1) {
        const int u = std::countr_zero(next);
        visited |= bit(u);
        order.push_back(u);
      }
    }
  }
  return order;
}

Decomposition truncate(const BayesNet& bn, const Decomposition& dec) {
  if (dec.provenance.kind != Provenance::Kind::BayesParents) {
    fail(ErrorKind::InvalidArgument, "truncation applies to a parents decomposition");
  }
  const std::vector<int> order = topological_order(bn);
  int s = 0;
  std::vector<int> earlier;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    std::vector<int> pa = bn.parents(order[pos]);
    std::sort(pa.begin(), pa.end());
    if (pa == earlier) s = static_cast<int>(pos);
    earlier.insert(std::upper_bound(earlier.begin(), earlier.end(), order[pos]), order[pos]);
  }
  if (s == 0) return dec;

  std::vector<bool> dropped(bn.size(), false);
  for (int pos = 0; pos < s; ++pos) dropped[order[pos]] = true;
  Decomposition out;
  out.provenance.kind = Provenance::Kind::Truncated;
  out.provenance.truncated_at = order[s];
  for (std::size_t k = 0; k < dec.size(); ++k) {
    const bool keep = std::none_of(dec.owners[k].begin(), dec.owners[k].end(),
                                   [&](int v) { return dropped[v]; });
    if (!keep) continue;
    out.neighborhoods.push_back(dec.neighborhoods[k]);
    out.owners.push_back(dec.owners[k]);
  }
  return out;
}

Decomposition contract(const Decomposition& dec, int s) {
  const int a = dec.owner_of(s);
  const int b = dec.owner_of(s + 1);
  if (a < 0 || b < 0) {
    fail(ErrorKind::NodeNotPresent, "nodes " + std::to_string(s) + " and " +
                                        std::to_string(s + 1) + " must both own a neighborhood");
  }
  if (a == b) {
    fail(ErrorKind::InvalidArgument,
         "nodes " + std::to_string(s) + " and " + std::to_string(s + 1) + " are already merged");
  }
  const int keep = std::min(a, b);
  const int drop = std::max(a, b);
  Decomposition out = dec;
  out.neighborhoods[keep] = sorted_union(dec.neighborhoods[a], dec.neighborhoods[b]);
  out.owners[keep] = sorted_union(dec.owners[a], dec.owners[b]);
  out.neighborhoods.erase(out.neighborhoods.begin() + drop);
  out.owners.erase(out.owners.begin() + drop);
  out.provenance.kind = Provenance::Kind::Contracted;
  out.provenance.merges.emplace_back(s, s + 1);
  return out;
}

}  // namespace subadd
