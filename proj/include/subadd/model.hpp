#pragma once

// Discrete distribution models: explicit joint tables, Bayes-nets, MRFs and the
// binary auto-regressive constructor.
//
// Joint assignments are indexed row-major with variable 0 varying slowest.
// This ordering is shared by the JSON model format and every table in the
// library.

#include <cstddef>
#include <span>
#include <vector>

#include "subadd/graph.hpp"

namespace subadd {

using Coord = std::vector<double>;

/// Current cap on the number of joint states. Defaults to 2^20; the
/// SUBADD_ENUM_LIMIT environment variable overrides it on first use.
std::size_t enumeration_limit();
void set_enumeration_limit(std::size_t limit);

class VariableSpace {
 public:
  VariableSpace() = default;
  explicit VariableSpace(std::vector<int> cardinalities);
  /// embedding[var][state] is the coordinate vector of that state.
  VariableSpace(std::vector<int> cardinalities, std::vector<std::vector<Coord>> embedding);

  std::size_t size() const { return cards_.size(); }
  int cardinality(std::size_t var) const { return cards_[var]; }
  const std::vector<int>& cardinalities() const { return cards_; }
  std::size_t state_count() const { return states_; }
  std::size_t stride(std::size_t var) const { return strides_[var]; }

  const std::vector<std::vector<Coord>>& embedding() const { return embedding_; }
  const Coord& coord(std::size_t var, int state) const { return embedding_[var][state]; }
  std::size_t embedding_dim(std::size_t var) const { return embedding_[var].front().size(); }
  /// Concatenated coordinates of a joint assignment.
  Coord embed(std::size_t index) const;

  void decode(std::size_t index, std::span<int> assignment) const;
  std::size_t encode(std::span<const int> assignment) const;

  /// Sub-space over `subset` (in the given order), keeping each variable's embedding.
  VariableSpace restrict_to(std::span<const int> subset) const;

  friend bool operator==(const VariableSpace&, const VariableSpace&) = default;

 private:
  std::vector<int> cards_;
  std::vector<std::vector<Coord>> embedding_;
  std::vector<std::size_t> strides_;
  std::size_t states_ = 1;
};

class FiniteDistribution {
 public:
  FiniteDistribution(VariableSpace space, std::vector<double> probs);

  const VariableSpace& space() const { return space_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::size_t state_count() const { return probs_.size(); }

 private:
  VariableSpace space_;
  std::vector<double> probs_;
};

FiniteDistribution marginal(const FiniteDistribution& dist, std::span<const int> subset);

class BayesNet {
 public:
  /// cpts[i] holds one row of length cardinality(i) per parent configuration,
  /// rows laid out row-major over parents[i] in the listed order.
  BayesNet(VariableSpace space, std::vector<std::vector<int>> parents,
           std::vector<std::vector<double>> cpts);

  const VariableSpace& space() const { return space_; }
  std::size_t size() const { return space_.size(); }
  const std::vector<int>& parents(std::size_t node) const { return parents_[node]; }
  const std::vector<std::vector<int>>& all_parents() const { return parents_; }
  const std::vector<double>& cpt(std::size_t node) const { return cpts_[node]; }
  const std::vector<std::vector<double>>& cpts() const { return cpts_; }
  std::size_t parent_configs(std::size_t node) const;
  /// P(X_node = state | parents = config).
  double conditional(std::size_t node, std::size_t config, int state) const {
    return cpts_[node][config * static_cast<std::size_t>(space_.cardinality(node)) +
                       static_cast<std::size_t>(state)];
  }

 private:
  VariableSpace space_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<double>> cpts_;
};

class Mrf {
 public:
  /// potentials[c] is a strictly positive table over cliques[c], row-major in
  /// the listed clique order. The graph is the union of the clique edges.
  Mrf(VariableSpace space, std::vector<std::vector<int>> cliques,
      std::vector<std::vector<double>> potentials);
  Mrf(VariableSpace space, UndirectedGraph graph, std::vector<std::vector<int>> cliques,
      std::vector<std::vector<double>> potentials);

  const VariableSpace& space() const { return space_; }
  const UndirectedGraph& graph() const { return graph_; }
  const std::vector<std::vector<int>>& cliques() const { return cliques_; }
  const std::vector<double>& potential(std::size_t c) const { return potentials_[c]; }
  const std::vector<std::vector<double>>& potentials() const { return potentials_; }

 private:
  VariableSpace space_;
  UndirectedGraph graph_;
  std::vector<std::vector<int>> cliques_;
  std::vector<std::vector<double>> potentials_;
};

struct ExpandedMrf {
  FiniteDistribution dist;
  double partition;
};

FiniteDistribution expand_bayesnet(const BayesNet& bn);
FiniteDistribution expand_bayesnet_serial(const BayesNet& bn);
ExpandedMrf expand_mrf(const Mrf& m);
ExpandedMrf expand_mrf_serial(const Mrf& m);

/// Binary auto-regressive sequence: P(X_t = 1 | past) = logistic(sum_i coeffs[i] * X_{t-1-i}).
struct ArSpec {
  int n = 0;
  int p = 0;
  std::vector<double> coeffs;
  std::vector<double> initials;
};

double logistic(double u);
BayesNet autoregressive_bayesnet(const ArSpec& spec);

namespace detail {
/// Kahn's algorithm taking the lowest-index available node first.
std::vector<int> topological_order(const std::vector<std::vector<int>>& parents);
}  // namespace detail

/// Moral graph of a Bayes-net (parents married, directions dropped).
UndirectedGraph moral_graph(const BayesNet& bn);

}  // namespace subadd
