#include "subadd/random_models.hpp"

#include <algorithm>
#include <cmath>

namespace subadd {

std::vector<double> random_simplex(Rng& rng, std::size_t size, double zero_prob) {
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(size);
  double sum = 0.0;
  for (double& v : w) {
    v = (zero_prob > 0.0 && unit(rng) < zero_prob) ? 0.0 : expo(rng);
    sum += v;
  }
  if (sum == 0.0) {
    w[std::uniform_int_distribution<std::size_t>(0, size - 1)(rng)] = 1.0;
    return w;
  }
  for (double& v : w) v /= sum;
  // push the rounding residue onto the largest entry
  double total = 0.0;
  for (double v : w) total += v;
  *std::max_element(w.begin(), w.end()) += 1.0 - total;
  return w;
}

FiniteDistribution random_distribution(Rng& rng, const VariableSpace& space, double zero_prob) {
  return FiniteDistribution(space, random_simplex(rng, space.state_count(), zero_prob));
}

std::vector<std::vector<int>> random_dag(Rng& rng, int n, double edge_prob, int max_parents) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<int>> parents(n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < k; ++j) {
      if (static_cast<int>(parents[perm[k]].size()) >= max_parents) break;
      if (unit(rng) < edge_prob) parents[perm[k]].push_back(perm[j]);
    }
  }
  return parents;
}

VariableSpace random_space(Rng& rng, int n, int max_card) {
  std::uniform_int_distribution<int> card(2, std::max(2, max_card));
  std::vector<int> cards(n);
  for (int& c : cards) c = card(rng);
  return VariableSpace(cards);
}

BayesNet random_bayesnet(Rng& rng, const VariableSpace& space,
                         const std::vector<std::vector<int>>& parents) {
  std::vector<std::vector<double>> cpts(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    std::size_t rows = 1;
    for (int p : parents[i]) rows *= static_cast<std::size_t>(space.cardinality(p));
    const auto card = static_cast<std::size_t>(space.cardinality(i));
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row = random_simplex(rng, card);
      // mix with uniform so no entry vanishes
      double total = 0.0;
      for (double& v : row) {
        v = 0.9 * v + 0.1 / static_cast<double>(card);
        total += v;
      }
      row.back() += 1.0 - total;
      cpts[i].insert(cpts[i].end(), row.begin(), row.end());
    }
  }
  return BayesNet(space, parents, std::move(cpts));
}

UndirectedGraph random_graph(Rng& rng, int n, double edge_prob) {
  UndirectedGraph g(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (unit(rng) < edge_prob) g.add_edge(u, v);
    }
  }
  return g;
}

Mrf random_mrf(Rng& rng, const VariableSpace& space,
               const std::vector<std::vector<int>>& cliques) {
  std::uniform_real_distribution<double> logpot(std::log(0.2), std::log(5.0));
  std::vector<std::vector<double>> potentials;
  for (const auto& c : cliques) {
    std::size_t size = 1;
    for (int v : c) size *= static_cast<std::size_t>(space.cardinality(v));
    std::vector<double> table(size);
    for (double& v : table) v = std::exp(logpot(rng));
    potentials.push_back(std::move(table));
  }
  return Mrf(space, cliques, std::move(potentials));
}

UndirectedGraph cycle_graph(int n) {
  UndirectedGraph g(n);
  for (int k = 0; k < n; ++k) g.add_edge(k, (k + 1) % n);
  return g;
}

UndirectedGraph path_graph(int n) {
  UndirectedGraph g(n);
  for (int k = 0; k + 1 < n; ++k) g.add_edge(k, k + 1);
  return g;
}

}  // namespace subadd
