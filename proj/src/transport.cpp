#include "subadd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <string>

#include "subadd/error.hpp"

namespace subadd {

namespace {

constexpr double kTieTol = 1e-15;
constexpr double kSpdTol = 1e-10;
constexpr double kTraceClamp = 1e-8;

// Spanning-tree basis over row nodes 0..m-1 and column nodes m..m+n-1.
class TransportSimplex {
 public:
  TransportSimplex(const std::vector<double>& supply, const std::vector<double>& demand,
                   const Matrix& cost)
      : m_(supply.size()),
        n_(demand.size()),
        cost_(cost),
        flow_(m_, n_),
        basic_(m_ * n_, false),
        u_(m_, 0.0),
        v_(n_, 0.0) {
    double scale = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) scale = std::max(scale, std::abs(cost_(i, j)));
    }
    reduced_tol_ = 1e-12 * std::max(scale, 1.0);
    northwest_corner(supply, demand);
  }

  TransportPlan solve() {
    const long max_pivots = 50L * static_cast<long>(m_ * n_) + 1000;
    long pivots = 0;
    for (;;) {
      compute_duals();
      const auto entering = find_entering();
      if (!entering) break;
      if (++pivots > max_pivots) {
        fail(ErrorKind::SolverCycling, "transportation simplex exceeded its pivot budget");
      }
      pivot(entering->first, entering->second);
    }
    TransportPlan plan;
    plan.coupling = flow_;
    plan.cost = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) plan.cost += cost_(i, j) * flow_(i, j);
    }
    plan.dual_u = u_;
    plan.dual_v = v_;
    plan.pivots = pivots;
    return plan;
  }

 private:
  bool is_basic(std::size_t i, std::size_t j) const { return basic_[i * n_ + j]; }
  void set_basic(std::size_t i, std::size_t j, bool b) { basic_[i * n_ + j] = b; }

  void northwest_corner(const std::vector<double>& supply, const std::vector<double>& demand) {
    std::vector<double> ra = supply;
    std::vector<double> rb = demand;
    std::size_t i = 0;
    std::size_t j = 0;
    for (;;) {
      const bool last_row = i + 1 == m_;
      const bool last_col = j + 1 == n_;
      double x = 0.0;
      if (last_row) {
        x = rb[j];
      } else if (last_col) {
        x = ra[i];
      } else {
        x = std::min(ra[i], rb[j]);
      }
      x = std::max(x, 0.0);
      flow_(i, j) = x;
      set_basic(i, j, true);
      ra[i] -= x;
      rb[j] -= x;
      if (last_row && last_col) break;
      if (last_row) {
        ++j;
      } else if (last_col) {
        ++i;
      } else if (ra[i] <= rb[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void compute_duals() {
    std::vector<bool> known_u(m_, false);
    std::vector<bool> known_v(n_, false);
    std::queue<std::size_t> queue;  // node ids: rows then columns
    u_[0] = 0.0;
    known_u[0] = true;
    queue.push(0);
    while (!queue.empty()) {
      const std::size_t node = queue.front();
      queue.pop();
      if (node < m_) {
        const std::size_t i = node;
        for (std::size_t j = 0; j < n_; ++j) {
          if (is_basic(i, j) && !known_v[j]) {
            v_[j] = cost_(i, j) - u_[i];
            known_v[j] = true;
            queue.push(m_ + j);
          }
        }
      } else {
        const std::size_t j = node - m_;
        for (std::size_t i = 0; i < m_; ++i) {
          if (is_basic(i, j) && !known_u[i]) {
            u_[i] = cost_(i, j) - v_[j];
            known_u[i] = true;
            queue.push(i);
          }
        }
      }
    }
  }

  // Bland: the lowest-index cell (row-major) with a negative reduced cost.
  std::optional<std::pair<std::size_t, std::size_t>> find_entering() const {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic(i, j)) continue;
        if (cost_(i, j) - u_[i] - v_[j] < -reduced_tol_) return std::make_pair(i, j);
      }
    }
    return std::nullopt;
  }

  // Tree path from row node `row` to column node `col`, as the list of cells
  // traversed.
  std::vector<std::pair<std::size_t, std::size_t>> tree_path(std::size_t row,
                                                            std::size_t col) const {
    const std::size_t nodes = m_ + n_;
    std::vector<std::size_t> parent(nodes, nodes);
    std::queue<std::size_t> queue;
    parent[row] = row;
    queue.push(row);
    while (!queue.empty() && parent[m_ + col] == nodes) {
      const std::size_t node = queue.front();
      queue.pop();
      if (node < m_) {
        for (std::size_t j = 0; j < n_; ++j) {
          if (is_basic(node, j) && parent[m_ + j] == nodes) {
            parent[m_ + j] = node;
            queue.push(m_ + j);
          }
        }
      } else {
        const std::size_t j = node - m_;
        for (std::size_t i = 0; i < m_; ++i) {
          if (is_basic(i, j) && parent[i] == nodes) {
            parent[i] = node;
            queue.push(i);
          }
        }
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t node = m_ + col; node != row;) {
      const std::size_t up = parent[node];
      if (node >= m_) {
        cells.emplace_back(up, node - m_);
      } else {
        cells.emplace_back(node, up - m_);
      }
      node = up;
    }
    std::reverse(cells.begin(), cells.end());
    return cells;
  }

  void pivot(std::size_t ei, std::size_t ej) {
    // path cells alternate -, +, -, ... starting next to the entering row
    const auto path = tree_path(ei, ej);
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      theta = std::min(theta, flow_(path[k].first, path[k].second));
    }
    std::size_t leave = path.size();
    std::size_t leave_index = m_ * n_;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const auto [i, j] = path[k];
      if (flow_(i, j) - theta <= kTieTol && i * n_ + j < leave_index) {
        leave = k;
        leave_index = i * n_ + j;
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      const auto [i, j] = path[k];
      flow_(i, j) += (k % 2 == 0) ? -theta : theta;
      if (flow_(i, j) < 0.0) flow_(i, j) = 0.0;
    }
    const auto [li, lj] = path[leave];
    flow_(li, lj) = 0.0;
    set_basic(li, lj, false);
    flow_(ei, ej) = theta;
    set_basic(ei, ej, true);
  }

  std::size_t m_;
  std::size_t n_;
  const Matrix& cost_;
  Matrix flow_;
  std::vector<bool> basic_;
  std::vector<double> u_;
  std::vector<double> v_;
  double reduced_tol_ = 0.0;
};

}  // namespace

MetricTable metric_from_points(const std::vector<Coord>& points) {
  MetricTable out;
  const std::size_t m = points.size();
  out.d = Matrix(m, m);
  out.d_min = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (points[a].size() != points[b].size()) {
        fail(ErrorKind::DimensionMismatch, "points have different embedding dimensions");
      }
      double s = 0.0;
      for (std::size_t k = 0; k < points[a].size(); ++k) {
        const double diff = points[a][k] - points[b][k];
        s += diff * diff;
      }
      const double dist = std::sqrt(s);
      out.d(a, b) = dist;
      out.d(b, a) = dist;
      out.diam = std::max(out.diam, dist);
      if (dist > 0.0) out.d_min = std::min(out.d_min, dist);
    }
  }
  if (std::isinf(out.d_min)) out.d_min = 0.0;
  return out;
}

MetricTable metric_from_space(const VariableSpace& space) {
  std::vector<Coord> points;
  points.reserve(space.state_count());
  for (std::size_t s = 0; s < space.state_count(); ++s) points.push_back(space.embed(s));
  return metric_from_points(points);
}

TransportPlan solve_transportation(const std::vector<double>& supply,
                                   const std::vector<double>& demand, const Matrix& cost) {
  if (supply.empty() || demand.empty() || cost.rows() != supply.size() ||
      cost.cols() != demand.size()) {
    fail(ErrorKind::DimensionMismatch, "transportation problem shapes disagree");
  }
  // Solve on the supports; zero-mass rows and columns get feasible duals that
  // add nothing to the dual objective.
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < supply.size(); ++i) {
    if (supply[i] > 0.0) rows.push_back(i);
  }
  for (std::size_t j = 0; j < demand.size(); ++j) {
    if (demand[j] > 0.0) cols.push_back(j);
  }
  if (rows.empty() || cols.empty()) {
    fail(ErrorKind::InvalidArgument, "transportation marginals carry no mass");
  }
  std::vector<double> a;
  std::vector<double> b;
  Matrix c(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    a.push_back(supply[rows[r]]);
    for (std::size_t k = 0; k < cols.size(); ++k) c(r, k) = cost(rows[r], cols[k]);
  }
  for (std::size_t k = 0; k < cols.size(); ++k) b.push_back(demand[cols[k]]);

  TransportPlan reduced = TransportSimplex(a, b, c).solve();

  TransportPlan plan;
  plan.coupling = Matrix(supply.size(), demand.size());
  plan.dual_u.assign(supply.size(), std::numeric_limits<double>::infinity());
  plan.dual_v.assign(demand.size(), std::numeric_limits<double>::infinity());
  plan.cost = reduced.cost;
  plan.pivots = reduced.pivots;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    plan.dual_u[rows[r]] = reduced.dual_u[r];
    for (std::size_t k = 0; k < cols.size(); ++k) {
      plan.coupling(rows[r], cols[k]) = reduced.coupling(r, k);
    }
  }
  for (std::size_t k = 0; k < cols.size(); ++k) plan.dual_v[cols[k]] = reduced.dual_v[k];
  for (std::size_t j = 0; j < demand.size(); ++j) {
    if (!std::isinf(plan.dual_v[j])) continue;
    for (std::size_t i : rows) plan.dual_v[j] = std::min(plan.dual_v[j], cost(i, j) - plan.dual_u[i]);
  }
  for (std::size_t i = 0; i < supply.size(); ++i) {
    if (!std::isinf(plan.dual_u[i])) continue;
    for (std::size_t j = 0; j < demand.size(); ++j) {
      plan.dual_u[i] = std::min(plan.dual_u[i], cost(i, j) - plan.dual_v[j]);
    }
  }
  return plan;
}

CertificateCheck verify_plan(const TransportPlan& plan, const std::vector<double>& supply,
                             const std::vector<double>& demand, const Matrix& cost,
                             double marginal_tol, double duality_tol) {
  CertificateCheck out{0.0, 0.0, 0.0, false};
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  double negative = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += plan.coupling(i, j);
      negative = std::min(negative, plan.coupling(i, j));
      out.dual_infeasibility =
          std::max(out.dual_infeasibility, plan.dual_u[i] + plan.dual_v[j] - cost(i, j));
    }
    out.primal_residual = std::max(out.primal_residual, std::abs(row - supply[i]));
  }
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m; ++i) col += plan.coupling(i, j);
    out.primal_residual = std::max(out.primal_residual, std::abs(col - demand[j]));
  }
  out.primal_residual = std::max(out.primal_residual, -negative);
  double dual = 0.0;
  for (std::size_t i = 0; i < m; ++i) dual += plan.dual_u[i] * supply[i];
  for (std::size_t j = 0; j < n; ++j) dual += plan.dual_v[j] * demand[j];
  out.duality_gap = std::abs(dual - plan.cost);
  out.ok = out.primal_residual <= marginal_tol && out.dual_infeasibility <= duality_tol &&
           out.duality_gap <= duality_tol;
  return out;
}

WassersteinResult wasserstein_finite(double p, const FiniteDistribution& pdist,
                                     const FiniteDistribution& qdist, const MetricTable& metric) {
  if (!(pdist.space() == qdist.space())) {
    fail(ErrorKind::SpaceMismatch, "Wasserstein distance needs a shared variable space");
  }
  if (!(p >= 1.0)) fail(ErrorKind::ParameterOutOfRange, "Wasserstein order must be >= 1");
  const std::size_t m = pdist.state_count();
  if (metric.d.rows() != m || metric.d.cols() != m) {
    fail(ErrorKind::DimensionMismatch, "metric table does not match the state count");
  }
  Matrix cost(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) cost(i, j) = std::pow(metric.d(i, j), p);
  }
  std::vector<double> a(pdist.probs().begin(), pdist.probs().end());
  std::vector<double> b(qdist.probs().begin(), qdist.probs().end());
  TransportPlan plan = solve_transportation(a, b, cost);
  const double value = std::pow(std::max(plan.cost, 0.0), 1.0 / p);
  return {value, std::move(plan)};
}

WassersteinResult wasserstein_finite(double p, const FiniteDistribution& pdist,
                                     const FiniteDistribution& qdist) {
  return wasserstein_finite(p, pdist, qdist, metric_from_space(pdist.space()));
}

double wasserstein_1d_oracle(double p, const FiniteDistribution& pdist,
                             const FiniteDistribution& qdist) {
  const VariableSpace& space = pdist.space();
  if (!(space == qdist.space())) fail(ErrorKind::SpaceMismatch, "oracle needs a shared space");
  if (space.size() != 1 || space.embedding_dim(0) != 1) {
    fail(ErrorKind::NotOneDimensional, "quantile coupling needs a single 1-d variable");
  }
  const std::size_t m = pdist.state_count();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return space.coord(0, static_cast<int>(a))[0] < space.coord(0, static_cast<int>(b))[0];
  });
  std::size_t i = 0;
  std::size_t j = 0;
  double ra = m > 0 ? pdist[order[0]] : 0.0;
  double rb = m > 0 ? qdist[order[0]] : 0.0;
  double cost = 0.0;
  while (i < m && j < m) {
    if (ra <= 0.0) {
      if (++i < m) ra = pdist[order[i]];
      continue;
    }
    if (rb <= 0.0) {
      if (++j < m) rb = qdist[order[j]];
      continue;
    }
    const double moved = std::min(ra, rb);
    const double dist = std::abs(space.coord(0, static_cast<int>(order[i]))[0] -
                                 space.coord(0, static_cast<int>(order[j]))[0]);
    cost += moved * std::pow(dist, p);
    ra -= moved;
    rb -= moved;
  }
  return std::pow(cost, 1.0 / p);
}

Matrix spd_sqrt(const Matrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::DimensionMismatch, "square root needs a square matrix");
  if (m.asymmetry() > kSpdTol) fail(ErrorKind::NotSymmetric, "matrix is not symmetric");
  const SymmetricEigen eig = jacobi_eigen(m);
  const std::size_t n = m.rows();
  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.values[k];
    if (lambda < -kSpdTol) {
      fail(ErrorKind::IndefiniteMatrix, "eigenvalue " + std::to_string(lambda) + " is negative");
    }
    roots[k] = std::sqrt(std::max(lambda, 0.0));
  }
  Matrix s = eig.vectors * Matrix::diagonal(roots) * eig.vectors.transpose();
  return 0.5 * (s + s.transpose());
}

double wasserstein2_gaussian(const GaussianDistribution& p, const GaussianDistribution& q) {
  if (p.dim() != q.dim()) fail(ErrorKind::DimensionMismatch, "Gaussians differ in dimension");
  double mean_term = 0.0;
  for (std::size_t k = 0; k < p.dim(); ++k) {
    const double d = p.mean()[k] - q.mean()[k];
    mean_term += d * d;
  }
  if (p.cov() == q.cov()) return std::sqrt(mean_term);
  const Matrix root_q = spd_sqrt(q.cov());
  Matrix inner = root_q * p.cov() * root_q;
  inner = 0.5 * (inner + inner.transpose());
  double trace_term = p.cov().trace() + q.cov().trace() - 2.0 * spd_sqrt(inner).trace();
  if (trace_term < 0.0 && trace_term >= -kTraceClamp) trace_term = 0.0;
  return std::sqrt(std::max(mean_term + trace_term, 0.0));
}

}  // namespace subadd
