#include "subadd/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "subadd/error.hpp"

namespace subadd {

namespace {
constexpr double kSymmetryTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr double kMarkovTol = 1e-10;
}  // namespace

GaussianDistribution::GaussianDistribution(std::vector<double> mean, Matrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    fail(ErrorKind::DimensionMismatch, "covariance must be n x n for a mean of length n");
  }
  if (mean_.empty()) fail(ErrorKind::DimensionMismatch, "Gaussian must have dimension >= 1");
  if (cov_.asymmetry() > kSymmetryTol) {
    fail(ErrorKind::NotSymmetric, "covariance is not symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose());
  for (double lambda : jacobi_eigen(cov_).values) {
    if (lambda < -kPsdTol) {
      fail(ErrorKind::IndefiniteMatrix, "covariance has eigenvalue " + std::to_string(lambda));
    }
  }
}

GaussianDistribution gaussian_marginal(const GaussianDistribution& g,
                                       const std::vector<int>& subset) {
  if (subset.empty()) fail(ErrorKind::EmptySubset, "Gaussian marginal over an empty subset");
  std::vector<double> mean;
  for (int i : subset) {
    if (i < 0 || static_cast<std::size_t>(i) >= g.dim()) {
      fail(ErrorKind::IndexOutOfRange, "Gaussian marginal index out of range");
    }
    mean.push_back(g.mean()[i]);
  }
  return GaussianDistribution(std::move(mean), g.cov().submatrix(subset));
}

MarkovCheck gaussian_markov_check(const GaussianDistribution& g) {
  if (g.dim() != 3) fail(ErrorKind::WrongDimension, "Markov check needs a 3-d Gaussian");
  const Matrix& c = g.cov();
  const double residual = std::abs(c(2, 1) * c(1, 0) - c(2, 0) * c(1, 1));
  return {residual, residual <= kMarkovTol};
}

std::pair<GaussianDistribution, GaussianDistribution> counterexample_pair(double x, double y) {
  if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0)) {
    fail(ErrorKind::ParameterOutOfRange, "counter-example needs 0 < x, y < 1");
  }
  Matrix c1{{1.0, x, 0.0}, {x, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  Matrix c2{{1.0, x, x * y}, {x, 1.0, y}, {x * y, y, 1.0}};
  return {GaussianDistribution({0.0, 0.0, 0.0}, std::move(c1)),
          GaussianDistribution({0.0, 0.0, 0.0}, std::move(c2))};
}

PerturbedGaussian1D::PerturbedGaussian1D(double e) : eps(e) {
  if (!(e >= 0.0 && e < 1.0)) {
    fail(ErrorKind::ParameterOutOfRange, "perturbation size must lie in [0, 1)");
  }
}

DensityPair perturbed_density(const PerturbedGaussian1D& pg, double x) {
  const double q = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return {(1.0 + pg.eps * std::sin(x)) * q, q};
}

}  // namespace subadd
