#pragma once

#include <utility>
#include <vector>

#include "subadd/linalg.hpp"

namespace subadd {

/// Multivariate normal with a symmetric PSD covariance. The covariance is
/// symmetrized on construction; eigenvalues below -1e-10 are rejected.
class GaussianDistribution {
 public:
  GaussianDistribution(std::vector<double> mean, Matrix cov);

  std::size_t dim() const { return mean_.size(); }
  const std::vector<double>& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

 private:
  std::vector<double> mean_;
  Matrix cov_;
};

GaussianDistribution gaussian_marginal(const GaussianDistribution& g, const std::vector<int>& subset);

struct MarkovCheck {
  double residual;
  bool valid;
};

/// For a 3-d Gaussian X-Y-Z: |C32*C21 - C31*C22| <= 1e-10 means Z is
/// independent of X given Y.
MarkovCheck gaussian_markov_check(const GaussianDistribution& g);

/// P = N(0, C1), Q = N(0, C2) with C1 = [[1,x,0],[x,1,0],[0,0,1]] and
/// C2 = [[1,x,xy],[x,1,y],[xy,y,1]], for 0 < x, y < 1.
std::pair<GaussianDistribution, GaussianDistribution> counterexample_pair(double x, double y);

/// P(x) = (1 + eps sin x) Q(x) with Q the standard normal density.
struct PerturbedGaussian1D {
  explicit PerturbedGaussian1D(double eps);
  double eps;
};

struct DensityPair {
  double p;
  double q;
};

DensityPair perturbed_density(const PerturbedGaussian1D& pg, double x);

}  // namespace subadd
