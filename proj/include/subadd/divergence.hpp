#pragma once

// f-divergence generators, exact evaluation on finite tables, quadrature on
// the perturbed 1-d Gaussian, and the chi-square local approximation.
// Natural logarithms throughout.

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "subadd/gaussian.hpp"
#include "subadd/model.hpp"

namespace subadd {

class GeneratorKind {
 public:
  enum class Tag { KL, RKL, SKL, JS, H2, TV, CHI2, RCHI2, ALPHA };

  constexpr GeneratorKind(Tag tag) : tag_(tag) {}  // NOLINT: implicit from tag
  /// alpha = 1 and alpha = 0 collapse to KL and RKL exactly.
  static GeneratorKind alpha(double a);

  Tag tag() const { return tag_; }
  double alpha_value() const { return alpha_; }
  std::string name() const;

  friend bool operator==(const GeneratorKind&, const GeneratorKind&) = default;

 private:
  constexpr GeneratorKind(Tag tag, double a) : tag_(tag), alpha_(a) {}
  Tag tag_;
  double alpha_ = 0.0;
};

/// Accepts kl, rkl, skl, js, h2, tv, chi2, rchi2 and alpha:<a> (case-insensitive).
GeneratorKind parse_generator(std::string_view text);
std::string_view valid_generator_tags();

/// Nonnegative divergence value; +infinity is a legitimate result.
struct DivergenceValue {
  double value = 0.0;
  bool infinite() const { return std::isinf(value); }
};

/// f(t) for t >= 0, with f(0) the right limit (possibly +inf).
double generator_eval(GeneratorKind kind, double t);
/// f'(1); TV uses the subgradient 0.
double generator_slope_at_one(GeneratorKind kind);
/// lim_{t->inf} f(t)/t.
double generator_limit_slope(GeneratorKind kind);
/// f''(1); throws NotTwiceDifferentiable for TV.
double generator_curvature(GeneratorKind kind);
/// f(1+u) - f'(1) u, evaluated without cancellation near u = 0. Requires u > -1.
double generator_excess(GeneratorKind kind, double u);

DivergenceValue f_divergence(GeneratorKind kind, const FiniteDistribution& p,
                             const FiniteDistribution& q);

struct QuadratureDivergence {
  double value;
  /// bound on the mass dropped by truncating to [-10, 10]
  double tail_bound;
};

QuadratureDivergence f_divergence_1d(GeneratorKind kind, const PerturbedGaussian1D& pg,
                                     double rel_tol = 1e-10);
/// chi-square between the perturbed pair, by the same quadrature.
QuadratureDivergence chi2_1d(const PerturbedGaussian1D& pg, double rel_tol = 1e-10);

struct Chi2Approximation {
  double d_f;
  double approx;  // f''(1)/2 * chi2(P, Q)
  double diff;    // |d_f - approx|
  double chi2;
  double realized_eps;
};

Chi2Approximation chi2_approx_report(GeneratorKind kind, const FiniteDistribution& p,
                                     const FiniteDistribution& q);
Chi2Approximation chi2_approx_report(GeneratorKind kind, const PerturbedGaussian1D& pg);

/// max |P/Q - 1| over the support; throws NotTwoSidedClose when one side
/// vanishes where the other does not.
double realized_closeness(const FiniteDistribution& p, const FiniteDistribution& q);

}  // namespace subadd
