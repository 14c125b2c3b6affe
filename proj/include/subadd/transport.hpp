#pragma once

// Exact p-Wasserstein distances on finite metric spaces (dense transportation
// simplex with optimality certificate), a 1-d quantile-coupling oracle, and the
// closed-form W2 between Gaussians.

#include <vector>

#include "subadd/gaussian.hpp"
#include "subadd/linalg.hpp"
#include "subadd/model.hpp"

namespace subadd {

struct MetricTable {
  Matrix d;
  double diam = 0.0;
  double d_min = 0.0;  // smallest positive entry
};

/// Euclidean distances between the embedded joint states of `space`.
MetricTable metric_from_space(const VariableSpace& space);
MetricTable metric_from_points(const std::vector<Coord>& points);

struct TransportPlan {
  Matrix coupling;
  double cost = 0.0;
  std::vector<double> dual_u;
  std::vector<double> dual_v;
  long pivots = 0;
};

/// Solves min <C, X> s.t. X 1 = supply, X^T 1 = demand, X >= 0 with a dense
/// transportation simplex: northwest-corner start, Bland's rule for both the
/// entering and the leaving cell.
TransportPlan solve_transportation(const std::vector<double>& supply,
                                   const std::vector<double>& demand, const Matrix& cost);

struct CertificateCheck {
  double primal_residual;     // max marginal violation
  double dual_infeasibility;  // max(u_i + v_j - c_ij, 0)
  double duality_gap;         // |sum u a + sum v b - cost|
  bool ok;
};

CertificateCheck verify_plan(const TransportPlan& plan, const std::vector<double>& supply,
                             const std::vector<double>& demand, const Matrix& cost,
                             double marginal_tol = 1e-10, double duality_tol = 1e-8);

struct WassersteinResult {
  double value;
  TransportPlan plan;
};

WassersteinResult wasserstein_finite(double p, const FiniteDistribution& pdist,
                                     const FiniteDistribution& qdist, const MetricTable& metric);
/// Convenience overload deriving the metric from the shared space.
WassersteinResult wasserstein_finite(double p, const FiniteDistribution& pdist,
                                     const FiniteDistribution& qdist);

/// Monotone (quantile) coupling on a line; single variable with 1-d embedding only.
double wasserstein_1d_oracle(double p, const FiniteDistribution& pdist,
                             const FiniteDistribution& qdist);

/// Symmetric PSD square root via Jacobi; eigenvalues in [-1e-10, 0) clamp to 0.
Matrix spd_sqrt(const Matrix& m);

double wasserstein2_gaussian(const GaussianDistribution& p, const GaussianDistribution& q);

}  // namespace subadd
