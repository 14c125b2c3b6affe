#pragma once

// Seeded random instances for property suites.

#include <random>
#include <vector>

#include "subadd/graph.hpp"
#include "subadd/model.hpp"

namespace subadd {

using Rng = std::mt19937_64;

/// Uniform on the simplex; with `zero_prob` > 0 each entry is zeroed with that
/// probability (at least one entry stays positive).
std::vector<double> random_simplex(Rng& rng, std::size_t size, double zero_prob = 0.0);

FiniteDistribution random_distribution(Rng& rng, const VariableSpace& space,
                                       double zero_prob = 0.0);

/// Random DAG over n nodes (each earlier node is a parent with probability
/// `edge_prob`, at most `max_parents`), cardinalities in [2, max_card].
std::vector<std::vector<int>> random_dag(Rng& rng, int n, double edge_prob, int max_parents);
VariableSpace random_space(Rng& rng, int n, int max_card);

/// Random CPTs for the given structure; rows bounded away from zero.
BayesNet random_bayesnet(Rng& rng, const VariableSpace& space,
                         const std::vector<std::vector<int>>& parents);

UndirectedGraph random_graph(Rng& rng, int n, double edge_prob);

/// Potentials drawn log-uniformly from [1/5, 5].
Mrf random_mrf(Rng& rng, const VariableSpace& space, const std::vector<std::vector<int>>& cliques);

UndirectedGraph cycle_graph(int n);
UndirectedGraph path_graph(int n);

}  // namespace subadd
