#include "subadd/model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "subadd/error.hpp"

namespace subadd {

namespace {

constexpr double kProbTol = 1e-12;
constexpr std::size_t kParallelThreshold = 1u << 12;

std::atomic<std::size_t>& limit_storage() {
  static std::atomic<std::size_t> limit = [] {
    std::size_t value = std::size_t{1} << 20;
    if (const char* env = std::getenv("SUBADD_ENUM_LIMIT")) {
      char* end = nullptr;
      const unsigned long long parsed = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && parsed > 0) value = static_cast<std::size_t>(parsed);
    }
    return value;
  }();
  return limit;
}

void check_probability_vector(std::span<const double> row, const std::string& what) {
  double sum = 0.0;
  for (double v : row) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      fail(ErrorKind::InvalidProbability, what + " has a negative or non-finite entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    fail(ErrorKind::InvalidProbability, what + " sums to " + std::to_string(sum));
  }
}

void check_variable_list(const std::vector<int>& vars, std::size_t n, const std::string& what) {
  for (std::size_t a = 0; a < vars.size(); ++a) {
    if (vars[a] < 0 || static_cast<std::size_t>(vars[a]) >= n) {
      fail(ErrorKind::IndexOutOfRange, what + " references variable " + std::to_string(vars[a]));
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (vars[a] == vars[b]) fail(ErrorKind::InvalidModel, what + " repeats a variable");
    }
  }
}

// Row-major index of the configuration of `vars` inside a joint assignment.
std::size_t config_index(const std::vector<int>& vars, const VariableSpace& space,
                         std::span<const int> assignment) {
  std::size_t idx = 0;
  for (int v : vars) idx = idx * static_cast<std::size_t>(space.cardinality(v)) + assignment[v];
  return idx;
}

std::size_t table_size(const std::vector<int>& vars, const VariableSpace& space) {
  std::size_t size = 1;
  for (int v : vars) size *= static_cast<std::size_t>(space.cardinality(v));
  return size;
}

double bayes_weight(const BayesNet& bn, std::span<const int> assignment) {
  double w = 1.0;
  for (std::size_t i = 0; i < bn.size() && w != 0.0; ++i) {
    const std::size_t cfg = config_index(bn.parents(i), bn.space(), assignment);
    w *= bn.conditional(i, cfg, assignment[i]);
  }
  return w;
}

double mrf_weight(const Mrf& m, std::span<const int> assignment) {
  double w = 1.0;
  for (std::size_t c = 0; c < m.cliques().size(); ++c) {
    w *= m.potential(c)[config_index(m.cliques()[c], m.space(), assignment)];
  }
  return w;
}

template <class Weight>
std::vector<double> fill_serial(const VariableSpace& space, Weight weight) {
  std::vector<double> out(space.state_count());
  std::vector<int> assignment(space.size(), 0);
  for (std::size_t s = 0; s < out.size(); ++s) {
    space.decode(s, assignment);
    out[s] = weight(assignment);
  }
  return out;
}

template <class Weight>
std::vector<double> fill_parallel(const VariableSpace& space, Weight weight) {
  const std::size_t count = space.state_count();
  if (count < kParallelThreshold) return fill_serial(space, weight);
  std::vector<double> out(count);
  const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel
  {
    std::vector<int> assignment(space.size(), 0);
#pragma omp for schedule(static)
    for (std::ptrdiff_t s = 0; s < total; ++s) {
      space.decode(static_cast<std::size_t>(s), assignment);
      out[static_cast<std::size_t>(s)] = weight(assignment);
    }
  }
  return out;
}

// Normalization always sums in index order so the result does not depend on
// the thread count.
double normalize(std::vector<double>& table) {
  const double z = std::accumulate(table.begin(), table.end(), 0.0);
  for (double& v : table) v /= z;
  return z;
}

}  // namespace

std::size_t enumeration_limit() { return limit_storage().load(); }

void set_enumeration_limit(std::size_t limit) { limit_storage().store(limit); }

// ---------------------------------------------------------------------------

VariableSpace::VariableSpace(std::vector<int> cardinalities)
    : VariableSpace(cardinalities, {}) {}

VariableSpace::VariableSpace(std::vector<int> cardinalities,
                             std::vector<std::vector<Coord>> embedding)
    : cards_(std::move(cardinalities)), embedding_(std::move(embedding)) {
  const std::size_t limit = enumeration_limit();
  states_ = 1;
  for (int c : cards_) {
    if (c < 2) fail(ErrorKind::InvalidModel, "every cardinality must be at least 2");
    if (states_ > limit / static_cast<std::size_t>(c)) {
      fail(ErrorKind::EnumerationLimitExceeded,
           "joint state count exceeds the limit of " + std::to_string(limit));
    }
    states_ *= static_cast<std::size_t>(c);
  }
  if (embedding_.empty()) {
    embedding_.resize(cards_.size());
    for (std::size_t v = 0; v < cards_.size(); ++v) {
      for (int s = 0; s < cards_[v]; ++s) embedding_[v].push_back({static_cast<double>(s)});
    }
  }
  if (embedding_.size() != cards_.size()) {
    fail(ErrorKind::InvalidModel, "embedding must list every variable");
  }
  for (std::size_t v = 0; v < cards_.size(); ++v) {
    if (embedding_[v].size() != static_cast<std::size_t>(cards_[v])) {
      fail(ErrorKind::InvalidModel, "embedding of variable " + std::to_string(v) +
                                        " must list one coordinate per state");
    }
    const std::size_t dim = embedding_[v].front().size();
    if (dim == 0) fail(ErrorKind::InvalidModel, "embedding coordinates must be non-empty");
    for (const Coord& c : embedding_[v]) {
      if (c.size() != dim) {
        fail(ErrorKind::InvalidModel,
             "embedding dimension differs between states of variable " + std::to_string(v));
      }
    }
  }
  strides_.assign(cards_.size(), 1);
  for (std::size_t v = cards_.size(); v-- > 1;) {
    strides_[v - 1] = strides_[v] * static_cast<std::size_t>(cards_[v]);
  }
}

Coord VariableSpace::embed(std::size_t index) const {
  Coord out;
  for (std::size_t v = 0; v < cards_.size(); ++v) {
    const auto state = static_cast<int>((index / strides_[v]) % cards_[v]);
    const Coord& c = embedding_[v][state];
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

void VariableSpace::decode(std::size_t index, std::span<int> assignment) const {
  for (std::size_t v = cards_.size(); v-- > 0;) {
    assignment[v] = static_cast<int>(index % static_cast<std::size_t>(cards_[v]));
    index /= static_cast<std::size_t>(cards_[v]);
  }
}

std::size_t VariableSpace::encode(std::span<const int> assignment) const {
  std::size_t idx = 0;
  for (std::size_t v = 0; v < cards_.size(); ++v) {
    idx = idx * static_cast<std::size_t>(cards_[v]) + static_cast<std::size_t>(assignment[v]);
  }
  return idx;
}

VariableSpace VariableSpace::restrict_to(std::span<const int> subset) const {
  std::vector<int> cards;
  std::vector<std::vector<Coord>> emb;
  for (int v : subset) {
    cards.push_back(cards_[v]);
    emb.push_back(embedding_[v]);
  }
  return VariableSpace(std::move(cards), std::move(emb));
}

// ---------------------------------------------------------------------------

FiniteDistribution::FiniteDistribution(VariableSpace space, std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
  if (probs_.size() != space_.state_count()) {
    fail(ErrorKind::InvalidModel, "probability table has " + std::to_string(probs_.size()) +
                                      " entries, expected " +
                                      std::to_string(space_.state_count()));
  }
  check_probability_vector(probs_, "distribution");
}

FiniteDistribution marginal(const FiniteDistribution& dist, std::span<const int> subset) {
  const VariableSpace& space = dist.space();
  if (subset.empty()) fail(ErrorKind::EmptySubset, "marginal over an empty subset");
  std::vector<int> vars(subset.begin(), subset.end());
  check_variable_list(vars, space.size(), "marginal subset");

  VariableSpace sub = space.restrict_to(vars);
  std::vector<double> out(sub.state_count(), 0.0);
  std::vector<int> assignment(space.size(), 0);
  for (std::size_t s = 0; s < dist.state_count(); ++s) {
    out[config_index(vars, space, assignment)] += dist[s];
    // odometer increment, last variable fastest
    for (std::size_t v = space.size(); v-- > 0;) {
      if (++assignment[v] < space.cardinality(v)) break;
      assignment[v] = 0;
    }
  }
  return FiniteDistribution(std::move(sub), std::move(out));
}

// ---------------------------------------------------------------------------

namespace detail {

std::vector<int> topological_order(const std::vector<std::vector<int>>& parents) {
  const std::size_t n = parents.size();
  std::vector<int> remaining(n, 0);
  std::vector<std::vector<int>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    remaining[i] = static_cast<int>(parents[i].size());
    for (int p : parents[i]) children[p].push_back(static_cast<int>(i));
  }
  std::vector<int> order;
  std::vector<bool> done(n, false);
  while (order.size() < n) {
    int next = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && remaining[i] == 0) {
        next = static_cast<int>(i);
        break;
      }
    }
    if (next < 0) fail(ErrorKind::CyclicGraph, "parent relation contains a directed cycle");
    done[next] = true;
    order.push_back(next);
    for (int c : children[next]) --remaining[c];
  }
  return order;
}

}  // namespace detail

BayesNet::BayesNet(VariableSpace space, std::vector<std::vector<int>> parents,
                   std::vector<std::vector<double>> cpts)
    : space_(std::move(space)), parents_(std::move(parents)), cpts_(std::move(cpts)) {
  const std::size_t n = space_.size();
  if (parents_.size() != n || cpts_.size() != n) {
    fail(ErrorKind::InvalidModel, "parents and cpts must list every variable");
  }
  for (std::size_t i = 0; i < n; ++i) {
    check_variable_list(parents_[i], n, "parents of node " + std::to_string(i));
    if (std::find(parents_[i].begin(), parents_[i].end(), static_cast<int>(i)) !=
        parents_[i].end()) {
      fail(ErrorKind::CyclicGraph, "node " + std::to_string(i) + " is its own parent");
    }
  }
  detail::topological_order(parents_);
  for (std::size_t i = 0; i < n; ++i) {
    const auto card = static_cast<std::size_t>(space_.cardinality(i));
    const std::size_t rows = parent_configs(i);
    if (cpts_[i].size() != rows * card) {
      fail(ErrorKind::InvalidModel, "cpt of node " + std::to_string(i) + " must have " +
                                        std::to_string(rows) + " rows of length " +
                                        std::to_string(card));
    }
    for (std::size_t r = 0; r < rows; ++r) {
      check_probability_vector(std::span<const double>(cpts_[i]).subspan(r * card, card),
                               "cpt row " + std::to_string(r) + " of node " + std::to_string(i));
    }
  }
}

std::size_t BayesNet::parent_configs(std::size_t node) const {
  return table_size(parents_[node], space_);
}

// ---------------------------------------------------------------------------

namespace {

UndirectedGraph graph_from_cliques(std::size_t n, const std::vector<std::vector<int>>& cliques) {
  UndirectedGraph g(static_cast<int>(n));
  for (const auto& c : cliques) {
    for (std::size_t a = 0; a < c.size(); ++a) {
      for (std::size_t b = a + 1; b < c.size(); ++b) {
        if (c[a] >= 0 && c[b] >= 0 && static_cast<std::size_t>(c[a]) < n &&
            static_cast<std::size_t>(c[b]) < n) {
          g.add_edge(c[a], c[b]);
        }
      }
    }
  }
  return g;
}

}  // namespace

Mrf::Mrf(VariableSpace space, std::vector<std::vector<int>> cliques,
         std::vector<std::vector<double>> potentials)
    : Mrf(space, graph_from_cliques(space.size(), cliques), cliques, std::move(potentials)) {}

Mrf::Mrf(VariableSpace space, UndirectedGraph graph, std::vector<std::vector<int>> cliques,
         std::vector<std::vector<double>> potentials)
    : space_(std::move(space)),
      graph_(std::move(graph)),
      cliques_(std::move(cliques)),
      potentials_(std::move(potentials)) {
  if (static_cast<std::size_t>(graph_.size()) != space_.size()) {
    fail(ErrorKind::InvalidModel, "graph size differs from the variable count");
  }
  if (potentials_.size() != cliques_.size()) {
    fail(ErrorKind::InvalidModel, "one potential table is required per clique");
  }
  for (std::size_t c = 0; c < cliques_.size(); ++c) {
    const std::string what = "clique " + std::to_string(c);
    if (cliques_[c].empty()) fail(ErrorKind::InvalidModel, what + " is empty");
    check_variable_list(cliques_[c], space_.size(), what);
    if (!graph_.is_clique(cliques_[c])) {
      fail(ErrorKind::InvalidModel, what + " is not a clique of the graph");
    }
    if (potentials_[c].size() != table_size(cliques_[c], space_)) {
      fail(ErrorKind::InvalidModel, "potential of " + what + " has the wrong size");
    }
    for (double v : potentials_[c]) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        fail(ErrorKind::NonPositivePotential, "potential of " + what + " has a non-positive entry");
      }
    }
  }
}

// ---------------------------------------------------------------------------

FiniteDistribution expand_bayesnet(const BayesNet& bn) {
  auto table = fill_parallel(bn.space(), [&](std::span<const int> a) { return bayes_weight(bn, a); });
  normalize(table);
  return FiniteDistribution(bn.space(), std::move(table));
}

FiniteDistribution expand_bayesnet_serial(const BayesNet& bn) {
  auto table = fill_serial(bn.space(), [&](std::span<const int> a) { return bayes_weight(bn, a); });
  normalize(table);
  return FiniteDistribution(bn.space(), std::move(table));
}

ExpandedMrf expand_mrf(const Mrf& m) {
  auto table = fill_parallel(m.space(), [&](std::span<const int> a) { return mrf_weight(m, a); });
  const double z = normalize(table);
  return {FiniteDistribution(m.space(), std::move(table)), z};
}

ExpandedMrf expand_mrf_serial(const Mrf& m) {
  auto table = fill_serial(m.space(), [&](std::span<const int> a) { return mrf_weight(m, a); });
  const double z = normalize(table);
  return {FiniteDistribution(m.space(), std::move(table)), z};
}

// ---------------------------------------------------------------------------

double logistic(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

BayesNet autoregressive_bayesnet(const ArSpec& spec) {
  if (spec.p <= 0 || spec.p >= spec.n) {
    fail(ErrorKind::ParameterOutOfRange, "auto-regressive order must satisfy 0 < p < n");
  }
  if (spec.coeffs.size() != static_cast<std::size_t>(spec.p) ||
      spec.initials.size() != static_cast<std::size_t>(spec.p)) {
    fail(ErrorKind::ParameterOutOfRange, "need exactly p coefficients and p initials");
  }
  for (double psi : spec.initials) {
    if (!(psi >= 0.0 && psi <= 1.0)) {
      fail(ErrorKind::ParameterOutOfRange, "initial probabilities must lie in [0, 1]");
    }
  }
  const auto n = static_cast<std::size_t>(spec.n);
  std::vector<std::vector<int>> parents(n);
  std::vector<std::vector<double>> cpts(n);
  for (int t = 0; t < spec.n; ++t) {
    // parents listed most recent first: X_{t-1}, X_{t-2}, ...
    for (int lag = 1; lag <= spec.p && t - lag >= 0; ++lag) parents[t].push_back(t - lag);
    const std::size_t rows = std::size_t{1} << parents[t].size();
    auto& cpt = cpts[t];
    for (std::size_t cfg = 0; cfg < rows; ++cfg) {
      double one = 0.0;
      double zero = 0.0;
      if (t < spec.p) {
        // initial node: independent of its (formal) predecessors
        one = spec.initials[t];
        zero = 1.0 - one;
      } else {
        double u = 0.0;
        for (std::size_t k = 0; k < parents[t].size(); ++k) {
          // first listed parent is the slowest digit of cfg
          const std::size_t shift = parents[t].size() - 1 - k;
          if ((cfg >> shift) & 1u) u += spec.coeffs[k];
        }
        one = logistic(u);
        zero = logistic(-u);
      }
      cpt.push_back(zero);
      cpt.push_back(one);
    }
  }
  return BayesNet(VariableSpace(std::vector<int>(n, 2)), std::move(parents), std::move(cpts));
}

UndirectedGraph moral_graph(const BayesNet& bn) {
  UndirectedGraph g(static_cast<int>(bn.size()));
  for (std::size_t i = 0; i < bn.size(); ++i) {
    const auto& pa = bn.parents(i);
    for (std::size_t a = 0; a < pa.size(); ++a) {
      g.add_edge(static_cast<int>(i), pa[a]);
      for (std::size_t b = a + 1; b < pa.size(); ++b) g.add_edge(pa[a], pa[b]);
    }
  }
  return g;
}

}  // namespace subadd
