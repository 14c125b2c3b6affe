#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subadd/error.hpp"
#include "subadd/gaussian.hpp"
#include "subadd/linalg.hpp"

using namespace subadd;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("covariance validation") {
  CHECK(kind_of([] { GaussianDistribution({0, 0}, Matrix{{1, 0.5}, {0.4, 1}}); }) ==
        ErrorKind::NotSymmetric);
  CHECK(kind_of([] { GaussianDistribution({0, 0}, Matrix{{1, 2}, {2, 1}}); }) ==
        ErrorKind::IndefiniteMatrix);
  CHECK(kind_of([] { GaussianDistribution({0}, Matrix{{1, 0}, {0, 1}}); }) ==
        ErrorKind::DimensionMismatch);
  // singular but PSD is fine
  GaussianDistribution g({0, 0}, Matrix{{1, 1}, {1, 1}});
  CHECK(g.dim() == 2);
}

TEST_CASE("marginal extracts the sub-covariance in the given order") {
  GaussianDistribution g({1, 2, 3}, Matrix{{4, 1, 0.5}, {1, 3, 0.2}, {0.5, 0.2, 2}});
  const auto m = gaussian_marginal(g, {2, 0});
  CHECK(m.mean() == std::vector<double>{3, 1});
  CHECK(m.cov()(0, 0) == 2.0);
  CHECK(m.cov()(0, 1) == 0.5);
  CHECK(m.cov()(1, 1) == 4.0);
  CHECK(kind_of([&] { gaussian_marginal(g, {}); }) == ErrorKind::EmptySubset);
  CHECK(kind_of([&] { gaussian_marginal(g, {3}); }) == ErrorKind::IndexOutOfRange);
}

TEST_CASE("Markov check on three-variable Gaussians") {
  const auto [p, q] = counterexample_pair(0.3, 0.6);
  CHECK(gaussian_markov_check(p).valid);
  CHECK(gaussian_markov_check(q).valid);
  CHECK(gaussian_markov_check(q).residual <= 1e-15);
  GaussianDistribution bad({0, 0, 0}, Matrix{{1, 0.5, 0.5}, {0.5, 1, 0}, {0.5, 0, 1}});
  const auto r = gaussian_markov_check(bad);
  CHECK_FALSE(r.valid);
  CHECK(r.residual == doctest::Approx(0.5));
  CHECK(kind_of([] { gaussian_markov_check(GaussianDistribution({0, 0}, Matrix::identity(2))); }) ==
        ErrorKind::WrongDimension);
}

TEST_CASE("counter-example pair") {
  const auto [p, q] = counterexample_pair(0.5, 0.25);
  CHECK(p.cov()(0, 1) == 0.5);
  CHECK(p.cov()(0, 2) == 0.0);
  CHECK(q.cov()(0, 2) == 0.125);
  CHECK(q.cov()(1, 2) == 0.25);
  for (double bad : {0.0, 1.0, -0.5, 1.5}) {
    CHECK(kind_of([&] { counterexample_pair(bad, 0.5); }) == ErrorKind::ParameterOutOfRange);
    CHECK(kind_of([&] { counterexample_pair(0.5, bad); }) == ErrorKind::ParameterOutOfRange);
  }
}

TEST_CASE("perturbed Gaussian density") {
  const PerturbedGaussian1D pg(0.3);
  const auto d0 = perturbed_density(pg, 0.0);
  CHECK(d0.p == doctest::Approx(d0.q));
  CHECK(d0.q == doctest::Approx(0.3989422804014327));
  const auto d1 = perturbed_density(pg, M_PI / 2);
  CHECK(d1.p == doctest::Approx(1.3 * d1.q));
  CHECK(kind_of([] { PerturbedGaussian1D(1.0); }) == ErrorKind::ParameterOutOfRange);
  CHECK(kind_of([] { PerturbedGaussian1D(-0.1); }) == ErrorKind::ParameterOutOfRange);
}

TEST_CASE("Jacobi eigen-decomposition reconstructs the matrix") {
  Matrix a{{4, 1, -2, 0.5}, {1, 3, 0, 1}, {-2, 0, 5, 0.3}, {0.5, 1, 0.3, 2}};
  const auto e = jacobi_eigen(a);
  const Matrix back = e.vectors * Matrix::diagonal(e.values) * e.vectors.transpose();
  CHECK((back - a).frobenius_norm() <= 1e-12);
  const Matrix orth = e.vectors.transpose() * e.vectors - Matrix::identity(4);
  CHECK(orth.frobenius_norm() <= 1e-12);
  double sum = 0.0;
  for (double v : e.values) sum += v;
  CHECK(sum == doctest::Approx(a.trace()));
}
