#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "subadd/divergence.hpp"
#include "subadd/error.hpp"
#include "subadd/random_models.hpp"
#include "subadd/transport.hpp"

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

// Masses on a 1/8 grid so degenerate ties are exact.
std::vector<double> eighths(Rng& rng, int size) {
  std::vector<double> out(size, 0.0);
  std::uniform_int_distribution<int> pick(0, size - 1);
  for (int k = 0; k < 8; ++k) out[pick(rng)] += 0.125;
  return out;
}

Matrix random_spd(Rng& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  }
  return a * a.transpose() + 0.1 * Matrix::identity(n);
}

}  // namespace

TEST_CASE("metric of the binary cube") {
  const auto m = metric_from_space(VariableSpace({2, 2, 2, 2}));
  CHECK(m.diam == doctest::Approx(2.0));
  CHECK(m.d_min == doctest::Approx(1.0));
  CHECK(m.d(0, 15) == doctest::Approx(2.0));
  CHECK(m.d(3, 5) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("W_p of two point masses is their distance") {
  const VariableSpace s({3}, {{{0.0}, {1.0}, {4.0}}});
  const FiniteDistribution p(s, {1.0, 0.0, 0.0});
  const FiniteDistribution q(s, {0.0, 0.0, 1.0});
  CHECK(wasserstein_finite(1.0, p, q).value == doctest::Approx(4.0));
  CHECK(wasserstein_finite(2.0, p, q).value == doctest::Approx(4.0));
  CHECK(wasserstein_finite(1.0, p, p).value == 0.0);
}

TEST_CASE("transportation simplex agrees with basis enumeration") {
  Rng rng(31);
  std::uniform_real_distribution<double> unit(0.0, 3.0);
  for (int trial = 0; trial < 150; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 2 + (trial / 3) % 3;
    const auto a = eighths(rng, m);
    const auto b = eighths(rng, n);
    std::vector<std::vector<double>> c(m, std::vector<double>(n));
    Matrix cm(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        // small integer costs produce many ties
        c[i][j] = std::floor(unit(rng));
        cm(i, j) = c[i][j];
      }
    }
    const auto plan = solve_transportation(a, b, cm);
    CHECK(plan.cost == doctest::Approx(oracle::vertex_enumeration_cost(a, b, c)).scale(1.0));
    CHECK(verify_plan(plan, a, b, cm).ok);
  }
}

TEST_CASE("finite W_p agrees with the quantile coupling in one dimension") {
  Rng rng(32);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + trial % 12;
    std::vector<Coord> pts(k);
    for (auto& pt : pts) pt = {coord(rng)};
    const VariableSpace s({k}, {pts});
    const auto p = random_distribution(rng, s, 0.3);
    const auto q = random_distribution(rng, s, 0.3);
    for (double order : {1.0, 2.0, 3.0}) {
      const auto w = wasserstein_finite(order, p, q);
      CHECK(std::abs(w.value - wasserstein_1d_oracle(order, p, q)) <= 1e-9);
    }
  }
}

TEST_CASE("optimal plans carry a strong-duality certificate") {
  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const VariableSpace s = random_space(rng, 3, 3);
    const auto p = random_distribution(rng, s, 0.2);
    const auto q = random_distribution(rng, s, 0.2);
    const auto metric = metric_from_space(s);
    Matrix cost(metric.d.rows(), metric.d.cols());
    for (std::size_t i = 0; i < cost.rows(); ++i) {
      for (std::size_t j = 0; j < cost.cols(); ++j) cost(i, j) = metric.d(i, j) * metric.d(i, j);
    }
    const auto w = wasserstein_finite(2.0, p, q, metric);
    const std::vector<double> a(p.probs().begin(), p.probs().end());
    const std::vector<double> b(q.probs().begin(), q.probs().end());
    const auto cert = verify_plan(w.plan, a, b, cost);
    CHECK(cert.ok);
    CHECK(cert.duality_gap <= 1e-8);
  }
}

TEST_CASE("property: W_p^p is sandwiched by TV times d_min^p and diam^p") {
  Rng rng(34);
  for (int trial = 0; trial < 60; ++trial) {
    const VariableSpace s = random_space(rng, 2 + trial % 2, 3);
    const auto p = random_distribution(rng, s, 0.2);
    const auto q = random_distribution(rng, s, 0.2);
    const auto metric = metric_from_space(s);
    const double tv = f_divergence(GeneratorKind::Tag::TV, p, q).value;
    for (double order : {1.0, 2.0}) {
      const double wp = std::pow(wasserstein_finite(order, p, q, metric).value, order);
      CHECK(std::pow(metric.d_min, order) * tv - wp <= 1e-10);
      CHECK(wp - std::pow(metric.diam, order) * tv <= 1e-10);
    }
  }
}

TEST_CASE("Wasserstein input checks") {
  const VariableSpace s({2});
  const FiniteDistribution p(s, {0.5, 0.5});
  const FiniteDistribution q(VariableSpace({3}), {0.2, 0.3, 0.5});
  CHECK(kind_of([&] { wasserstein_finite(1.0, p, q); }) == ErrorKind::SpaceMismatch);
  CHECK(kind_of([&] { wasserstein_finite(0.5, p, p); }) == ErrorKind::ParameterOutOfRange);
  const FiniteDistribution two(VariableSpace({2, 2}), {0.25, 0.25, 0.25, 0.25});
  CHECK(kind_of([&] { wasserstein_1d_oracle(1.0, two, two); }) == ErrorKind::NotOneDimensional);
}

TEST_CASE("spd_sqrt multiplies back") {
  Rng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_spd(rng, 1 + trial % 8);
    const Matrix r = spd_sqrt(a);
    CHECK((r * r - a).frobenius_norm() <= 1e-8);
    CHECK(r.asymmetry() <= 1e-14);
  }
  CHECK(kind_of([] { spd_sqrt(Matrix{{1, 0.5}, {0.2, 1}}); }) == ErrorKind::NotSymmetric);
  CHECK(kind_of([] { spd_sqrt(Matrix{{1, 2}, {2, 1}}); }) == ErrorKind::IndefiniteMatrix);
  // tiny negative eigenvalue is clamped
  const Matrix r = spd_sqrt(Matrix{{1, 1}, {1, 1 - 1e-12}});
  CHECK(std::isfinite(r(0, 0)));
}

TEST_CASE("Gaussian W2 closed forms") {
  const GaussianDistribution a({0.0}, Matrix{{1.0}});
  const GaussianDistribution b({1.0}, Matrix{{4.0}});
  CHECK(std::abs(wasserstein2_gaussian(a, b) - std::sqrt(2.0)) <= 1e-10);
  CHECK(wasserstein2_gaussian(a, a) == 0.0);

  Rng rng(36);
  std::uniform_real_distribution<double> var(0.1, 4.0);
  std::normal_distribution<double> mean(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 5;
    std::vector<double> m1(n), m2(n), s1(n), s2(n);
    double expected = 0.0;
    for (int k = 0; k < n; ++k) {
      m1[k] = mean(rng);
      m2[k] = mean(rng);
      s1[k] = var(rng);
      s2[k] = var(rng);
      expected += (m1[k] - m2[k]) * (m1[k] - m2[k]) +
                  (std::sqrt(s1[k]) - std::sqrt(s2[k])) * (std::sqrt(s1[k]) - std::sqrt(s2[k]));
    }
    const GaussianDistribution p(m1, Matrix::diagonal(s1));
    const GaussianDistribution q(m2, Matrix::diagonal(s2));
    CHECK(std::abs(wasserstein2_gaussian(p, q) - std::sqrt(expected)) <= 1e-10);
  }
  CHECK(kind_of([&] { wasserstein2_gaussian(a, GaussianDistribution({0, 0}, Matrix::identity(2))); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("Gaussian W2 is symmetric and satisfies the triangle inequality") {
  Rng rng(37);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<GaussianDistribution> g;
    for (int k = 0; k < 3; ++k) {
      std::vector<double> m(n);
      for (double& v : m) v = normal(rng);
      g.emplace_back(m, random_spd(rng, n));
    }
    const double ab = wasserstein2_gaussian(g[0], g[1]);
    CHECK(ab == doctest::Approx(wasserstein2_gaussian(g[1], g[0])).epsilon(1e-9));
    CHECK(ab <= wasserstein2_gaussian(g[0], g[2]) + wasserstein2_gaussian(g[2], g[1]) + 1e-9);
  }
}
