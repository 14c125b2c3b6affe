#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>

#include "subadd/divergence.hpp"
#include "subadd/error.hpp"
#include "subadd/random_models.hpp"

using namespace subadd;
using Tag = GeneratorKind::Tag;

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

FiniteDistribution bern(double one) { return FiniteDistribution(VariableSpace({2}), {1.0 - one, one}); }

// Generators written straight from their textbook form.
std::function<double(double)> naive_generator(Tag tag, double a = 0.0) {
  switch (tag) {
    case Tag::KL: return [](double t) { return t * std::log(t); };
    case Tag::RKL: return [](double t) { return -std::log(t); };
    case Tag::SKL: return [](double t) { return (t - 1.0) * std::log(t); };
    case Tag::JS:
      return [](double t) {
        return 0.5 * t * std::log(2.0 * t / (t + 1.0)) + 0.5 * std::log(2.0 / (t + 1.0));
      };
    case Tag::H2: return [](double t) { return 0.5 * (std::sqrt(t) - 1.0) * (std::sqrt(t) - 1.0); };
    case Tag::TV: return [](double t) { return 0.5 * std::abs(t - 1.0); };
    case Tag::CHI2: return [](double t) { return (t - 1.0) * (t - 1.0); };
    case Tag::RCHI2: return [](double t) { return 1.0 / t - t; };
    case Tag::ALPHA: return [a](double t) { return (std::pow(t, a) - 1.0) / (a * (a - 1.0)); };
  }
  return {};
}

const std::vector<GeneratorKind> kSmooth{Tag::KL,   Tag::RKL,   Tag::SKL,
                                         Tag::JS,   Tag::H2,    Tag::CHI2,
                                         Tag::RCHI2, GeneratorKind::alpha(2.0),
                                         GeneratorKind::alpha(-0.5), GeneratorKind::alpha(0.5)};

}  // namespace

TEST_CASE("generator values match their direct formulas") {
  for (const auto& g : kSmooth) {
    const auto f = naive_generator(g.tag(), g.alpha_value());
    for (double t : {0.05, 0.3, 0.9, 1.0, 1.2, 2.5, 7.0}) {
      CAPTURE(g.name());
      CAPTURE(t);
      CHECK(generator_eval(g, t) == doctest::Approx(f(t)).epsilon(1e-12).scale(1.0));
    }
  }
  CHECK(generator_eval(Tag::TV, 0.25) == doctest::Approx(0.375));
  CHECK(generator_eval(Tag::H2, 4.0) == doctest::Approx(0.5));
}

TEST_CASE("generator derivatives at one match finite differences") {
  const double h = 1e-4;
  for (const auto& g : kSmooth) {
    const auto f = naive_generator(g.tag(), g.alpha_value());
    CAPTURE(g.name());
    CHECK(f(1.0) == doctest::Approx(0.0).scale(1.0));
    const double slope = (f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
    CHECK(generator_slope_at_one(g) == doctest::Approx(slope).epsilon(1e-6));
    const double curv = (f(1.0 + h) - 2.0 * f(1.0) + f(1.0 - h)) / (h * h);
    CHECK(generator_curvature(g) == doctest::Approx(curv).epsilon(1e-5));
  }
  CHECK(kind_of([] { generator_curvature(Tag::TV); }) == ErrorKind::NotTwiceDifferentiable);
}

TEST_CASE("boundary conventions of the generators") {
  CHECK(generator_eval(Tag::KL, 0.0) == 0.0);
  CHECK(std::isinf(generator_eval(Tag::RKL, 0.0)));
  CHECK(generator_eval(Tag::JS, 0.0) == doctest::Approx(0.5 * std::log(2.0)));
  CHECK(generator_eval(Tag::H2, 0.0) == 0.5);
  CHECK(generator_limit_slope(Tag::JS) == doctest::Approx(0.5 * std::log(2.0)));
  CHECK(std::isinf(generator_limit_slope(Tag::KL)));
  // JS limit slope against the formula at a huge ratio
  const auto js = naive_generator(Tag::JS);
  CHECK(js(1e9) / 1e9 == doctest::Approx(generator_limit_slope(Tag::JS)).epsilon(1e-6));
}

TEST_CASE("alpha family collapses at 0 and 1") {
  CHECK(GeneratorKind::alpha(1.0) == GeneratorKind(Tag::KL));
  CHECK(GeneratorKind::alpha(0.0) == GeneratorKind(Tag::RKL));
  CHECK(parse_generator("alpha:1") == GeneratorKind(Tag::KL));
  CHECK(parse_generator("ALPHA:2").name() == "alpha:2");
}

TEST_CASE("unknown generator tags are rejected with the valid list") {
  try {
    parse_generator("bogus");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
    CHECK(std::string(e.what()).find("kl, rkl") != std::string::npos);
  }
  CHECK(kind_of([] { parse_generator("alpha:x"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("exact values on small tables") {
  CHECK(f_divergence(Tag::KL, bern(0.3), bern(0.3)).value == 0.0);
  CHECK(f_divergence(Tag::KL, bern(1.0), bern(0.5)).value == doctest::Approx(std::log(2.0)));
  CHECK(f_divergence(Tag::TV, bern(0.3), bern(0.7)).value == doctest::Approx(0.4));
  CHECK(f_divergence(Tag::H2, bern(0.0), bern(1.0)).value == doctest::Approx(1.0));
  CHECK(f_divergence(Tag::JS, bern(0.0), bern(1.0)).value == doctest::Approx(std::log(2.0)));
  CHECK(f_divergence(Tag::TV, bern(0.0), bern(1.0)).value == doctest::Approx(1.0));
  CHECK(f_divergence(Tag::KL, bern(0.5), bern(1.0)).infinite());
  CHECK(f_divergence(Tag::RKL, bern(1.0), bern(0.5)).infinite());
  CHECK(f_divergence(Tag::SKL, bern(1.0), bern(0.5)).infinite());
  const auto chi2 = f_divergence(Tag::CHI2, bern(0.2), bern(0.5)).value;
  CHECK(chi2 == doctest::Approx(0.09 / 0.5 + 0.09 / 0.5));
  CHECK(f_divergence(GeneratorKind::alpha(2.0), bern(0.2), bern(0.5)).value ==
        doctest::Approx(0.5 * chi2));
}

TEST_CASE("space mismatch is rejected") {
  const FiniteDistribution a(VariableSpace({3}), {0.2, 0.3, 0.5});
  CHECK(kind_of([&] { f_divergence(Tag::KL, a, bern(0.5)); }) == ErrorKind::SpaceMismatch);
}

TEST_CASE("property: SKL is the sum of both KL directions") {
  Rng rng(21);
  for (int k = 0; k < 100; ++k) {
    const VariableSpace s({2 + k % 20});
    const auto p = random_distribution(rng, s);
    const auto q = random_distribution(rng, s);
    const double skl = f_divergence(Tag::SKL, p, q).value;
    const double sum = f_divergence(Tag::KL, p, q).value + f_divergence(Tag::KL, q, p).value;
    CHECK(skl == doctest::Approx(sum).epsilon(1e-12));
    CHECK(f_divergence(Tag::RKL, p, q).value ==
          doctest::Approx(f_divergence(Tag::KL, q, p).value).epsilon(1e-12));
  }
}

TEST_CASE("property: Pinsker and the JS sandwich") {
  Rng rng(22);
  std::uniform_int_distribution<int> support(2, 64);
  for (int k = 0; k < 1000; ++k) {
    const VariableSpace s({support(rng)});
    const auto p = random_distribution(rng, s, 0.15);
    const auto q = random_distribution(rng, s, 0.15);
    const double h2 = f_divergence(Tag::H2, p, q).value;
    const double js = f_divergence(Tag::JS, p, q).value;
    const double tv = f_divergence(Tag::TV, p, q).value;
    const double kl = f_divergence(Tag::KL, p, q).value;
    CHECK(std::log(2.0) * h2 - js <= 1e-12);
    CHECK(js - h2 <= 1e-12);
    CHECK(tv - std::sqrt(0.5 * kl) <= 1e-12);
  }
}

TEST_CASE("perturbed Gaussian chi-square matches the moment identity") {
  for (double eps : {0.01, 0.1, 0.5, 0.9}) {
    const double exact = eps * eps * (1.0 - std::exp(-2.0)) / 2.0;
    CHECK(std::abs(chi2_1d(PerturbedGaussian1D(eps)).value - exact) <= 1e-8 * std::max(1.0, exact));
    CHECK(chi2_1d(PerturbedGaussian1D(eps)).value == doctest::Approx(exact).epsilon(1e-9));
  }
  CHECK(chi2_1d(PerturbedGaussian1D(0.0)).value == 0.0);
}

TEST_CASE("perturbed Gaussian KL against a fixed composite Simpson rule") {
  const double eps = 0.3;
  const int panels = 200000;
  const double a = -12.0;
  const double b = 12.0;
  const double h = (b - a) / panels;
  auto integrand = [&](double x) {
    const double q = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    const double p = (1.0 + eps * std::sin(x)) * q;
    return p * std::log(p / q);
  };
  double s = integrand(a) + integrand(b);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * integrand(a + k * h);
  const double reference = s * h / 3.0;
  const auto got = f_divergence_1d(Tag::KL, PerturbedGaussian1D(eps));
  CHECK(got.value == doctest::Approx(reference).epsilon(1e-9));
  CHECK(got.tail_bound < 1e-20);
}

TEST_CASE("chi-square approximation shrinks like eps^3 or faster") {
  for (GeneratorKind g : {GeneratorKind(Tag::KL), GeneratorKind(Tag::RKL), GeneratorKind(Tag::SKL),
                          GeneratorKind(Tag::JS), GeneratorKind(Tag::H2)}) {
    double prev = chi2_approx_report(g, PerturbedGaussian1D(0.02)).diff;
    for (double eps : {0.01, 0.005, 0.0025}) {
      const double cur = chi2_approx_report(g, PerturbedGaussian1D(eps)).diff;
      CAPTURE(g.name());
      CAPTURE(eps);
      CHECK(prev / cur >= 7.0);
      prev = cur;
    }
  }
  CHECK(chi2_approx_report(Tag::CHI2, PerturbedGaussian1D(0.01)).diff <= 1e-12);
  CHECK(kind_of([] { chi2_approx_report(Tag::TV, PerturbedGaussian1D(0.01)); }) ==
        ErrorKind::NotTwiceDifferentiable);
}

TEST_CASE("finite chi-square approximation and realized closeness") {
  const auto r = chi2_approx_report(Tag::KL, bern(0.51), bern(0.5));
  CHECK(r.realized_eps == doctest::Approx(0.02));
  CHECK(r.diff <= 1e-5);
  CHECK(kind_of([] { realized_closeness(bern(0.0), bern(0.5)); }) == ErrorKind::NotTwoSidedClose);
  CHECK(kind_of([] { chi2_approx_report(Tag::KL, bern(0.9), bern(0.3)); }) ==
        ErrorKind::NotTwoSidedClose);
}
