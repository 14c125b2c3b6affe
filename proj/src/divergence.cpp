#include "subadd/divergence.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "subadd/error.hpp"
#include "subadd/quadrature.hpp"

namespace subadd {

namespace {

using Tag = GeneratorKind::Tag;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;
constexpr double kClampTol = 1e-12;
constexpr double kTruncation = 10.0;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void require_same_space(const FiniteDistribution& p, const FiniteDistribution& q) {
  if (!(p.space() == q.space())) {
    fail(ErrorKind::SpaceMismatch, "distributions live on different variable spaces");
  }
}

// f(0) as the right limit.
double generator_at_zero(GeneratorKind kind) {
  switch (kind.tag()) {
    case Tag::KL: return 0.0;
    case Tag::RKL: return kInf;
    case Tag::SKL: return kInf;
    case Tag::JS: return 0.5 * kLn2;
    case Tag::H2: return 0.5;
    case Tag::TV: return 0.5;
    case Tag::CHI2: return 1.0;
    case Tag::RCHI2: return kInf;
    case Tag::ALPHA: {
      const double a = kind.alpha_value();
      return a > 0.0 ? -1.0 / (a * (a - 1.0)) : kInf;
    }
  }
  return kInf;
}

// Q * f(P / Q) for one state, including the boundary conventions.
double contribution(GeneratorKind kind, double p, double q) {
  if (q == 0.0) {
    if (p == 0.0) return 0.0;
    const double slope = generator_limit_slope(kind);
    return std::isinf(slope) ? kInf : p * slope;
  }
  if (p == 0.0) {
    const double f0 = generator_at_zero(kind);
    return std::isinf(f0) ? kInf : q * f0;
  }
  const double u = (p - q) / q;
  return q * generator_excess(kind, u) + generator_slope_at_one(kind) * (p - q);
}

}  // namespace

GeneratorKind GeneratorKind::alpha(double a) {
  if (a == 1.0) return GeneratorKind(Tag::KL);
  if (a == 0.0) return GeneratorKind(Tag::RKL);
  if (!std::isfinite(a)) fail(ErrorKind::InvalidArgument, "alpha must be finite");
  return GeneratorKind(Tag::ALPHA, a);
}

std::string GeneratorKind::name() const {
  switch (tag_) {
    case Tag::KL: return "kl";
    case Tag::RKL: return "rkl";
    case Tag::SKL: return "skl";
    case Tag::JS: return "js";
    case Tag::H2: return "h2";
    case Tag::TV: return "tv";
    case Tag::CHI2: return "chi2";
    case Tag::RCHI2: return "rchi2";
    case Tag::ALPHA: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "alpha:%g", alpha_);
      return buf;
    }
  }
  return "unknown";
}

std::string_view valid_generator_tags() {
  return "kl, rkl, skl, js, h2, tv, chi2, rchi2, alpha:<a>";
}

GeneratorKind parse_generator(std::string_view text) {
  const std::string s = lower(text);
  if (s == "kl") return Tag::KL;
  if (s == "rkl") return Tag::RKL;
  if (s == "skl") return Tag::SKL;
  if (s == "js") return Tag::JS;
  if (s == "h2") return Tag::H2;
  if (s == "tv") return Tag::TV;
  if (s == "chi2") return Tag::CHI2;
  if (s == "rchi2") return Tag::RCHI2;
  if (s.rfind("alpha:", 0) == 0) {
    const std::string num = s.substr(6);
    double a = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), a);
    if (ec == std::errc() && ptr == num.data() + num.size() && !num.empty()) {
      return GeneratorKind::alpha(a);
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown divergence kind '" + std::string(text) +
                                       "'; valid tags: " + std::string(valid_generator_tags()));
}

double generator_slope_at_one(GeneratorKind kind) {
  switch (kind.tag()) {
    case Tag::KL: return 1.0;
    case Tag::RKL: return -1.0;
    case Tag::RCHI2: return -2.0;
    case Tag::ALPHA: return 1.0 / (kind.alpha_value() - 1.0);
    case Tag::SKL:
    case Tag::JS:
    case Tag::H2:
    case Tag::TV:
    case Tag::CHI2: return 0.0;
  }
  return 0.0;
}

double generator_limit_slope(GeneratorKind kind) {
  switch (kind.tag()) {
    case Tag::KL:
    case Tag::SKL:
    case Tag::CHI2: return kInf;
    case Tag::RKL: return 0.0;
    case Tag::JS: return 0.5 * kLn2;
    case Tag::H2:
    case Tag::TV: return 0.5;
    case Tag::RCHI2: return -1.0;
    case Tag::ALPHA: return kind.alpha_value() > 1.0 ? kInf : 0.0;
  }
  return kInf;
}

double generator_curvature(GeneratorKind kind) {
  switch (kind.tag()) {
    case Tag::KL:
    case Tag::RKL:
    case Tag::ALPHA: return 1.0;
    case Tag::SKL:
    case Tag::CHI2:
    case Tag::RCHI2: return 2.0;
    case Tag::JS:
    case Tag::H2: return 0.25;
    case Tag::TV: break;
  }
  fail(ErrorKind::NotTwiceDifferentiable, "the TV generator is not differentiable at 1");
}

double generator_excess(GeneratorKind kind, double u) {
  switch (kind.tag()) {
    case Tag::KL: return (1.0 + u) * std::log1p(u) - u;
    case Tag::RKL: return u - std::log1p(u);
    case Tag::SKL: return u * std::log1p(u);
    case Tag::JS: {
      const double w = u / (2.0 + u);
      return 0.5 * (1.0 + u) * std::log1p(w) + 0.5 * std::log1p(-w);
    }
    case Tag::H2: {
      const double d = u / (std::sqrt(1.0 + u) + 1.0);  // sqrt(t) - 1
      return 0.5 * d * d;
    }
    case Tag::TV: return 0.5 * std::abs(u);
    case Tag::CHI2: return u * u;
    case Tag::RCHI2: return u * u / (1.0 + u);
    case Tag::ALPHA: {
      const double a = kind.alpha_value();
      return (std::expm1(a * std::log1p(u)) - a * u) / (a * (a - 1.0));
    }
  }
  return 0.0;
}

double generator_eval(GeneratorKind kind, double t) {
  if (!(t >= 0.0)) fail(ErrorKind::InvalidArgument, "generator argument must be nonnegative");
  if (t == 0.0) return generator_at_zero(kind);
  if (std::isinf(t)) return kInf;
  const double u = t - 1.0;
  return generator_excess(kind, u) + generator_slope_at_one(kind) * u;
}

DivergenceValue f_divergence(GeneratorKind kind, const FiniteDistribution& p,
                             const FiniteDistribution& q) {
  require_same_space(p, q);
  double total = 0.0;
  for (std::size_t s = 0; s < p.state_count(); ++s) {
    total += contribution(kind, p[s], q[s]);
    if (std::isinf(total)) return {kInf};
  }
  if (total < 0.0 && total >= -kClampTol) total = 0.0;
  return {total};
}

// ---------------------------------------------------------------------------

namespace {

double standard_normal(double x) {
  return std::exp(-0.5 * x * x) * 0.39894228040143267794;
}

double tail_mass() { return 0.5 * std::erfc(kTruncation / std::sqrt(2.0)); }

}  // namespace

QuadratureDivergence f_divergence_1d(GeneratorKind kind, const PerturbedGaussian1D& pg,
                                     double rel_tol) {
  const double eps = pg.eps;
  if (eps == 0.0) return {0.0, 0.0};
  // The linear part f'(1) * eps * sin(x) integrates to zero against the even
  // density, so only the excess is integrated.
  auto integrand = [&](double x) {
    return standard_normal(x) * generator_excess(kind, eps * std::sin(x));
  };
  const auto r = adaptive_simpson(integrand, -kTruncation, kTruncation, rel_tol);
  const double fmax = std::max(generator_excess(kind, eps), generator_excess(kind, -eps));
  return {std::max(r.value, 0.0), 2.0 * fmax * tail_mass()};
}

QuadratureDivergence chi2_1d(const PerturbedGaussian1D& pg, double rel_tol) {
  return f_divergence_1d(Tag::CHI2, pg, rel_tol);
}

double realized_closeness(const FiniteDistribution& p, const FiniteDistribution& q) {
  require_same_space(p, q);
  double eps = 0.0;
  for (std::size_t s = 0; s < p.state_count(); ++s) {
    if (p[s] == 0.0 && q[s] == 0.0) continue;
    if (p[s] == 0.0 || q[s] == 0.0) {
      fail(ErrorKind::NotTwoSidedClose,
           "state " + std::to_string(s) + " has mass under only one distribution");
    }
    eps = std::max(eps, std::abs(p[s] - q[s]) / q[s]);
  }
  return eps;
}

Chi2Approximation chi2_approx_report(GeneratorKind kind, const FiniteDistribution& p,
                                     const FiniteDistribution& q) {
  const double curvature = generator_curvature(kind);
  const double eps = realized_closeness(p, q);
  if (eps >= 1.0) {
    fail(ErrorKind::NotTwoSidedClose,
         "density ratio leaves (0, 2): realized closeness " + std::to_string(eps));
  }
  const double d_f = f_divergence(kind, p, q).value;
  const double chi2 = f_divergence(Tag::CHI2, p, q).value;
  const double approx = 0.5 * curvature * chi2;
  return {d_f, approx, std::abs(d_f - approx), chi2, eps};
}

Chi2Approximation chi2_approx_report(GeneratorKind kind, const PerturbedGaussian1D& pg) {
  const double curvature = generator_curvature(kind);
  const double d_f = f_divergence_1d(kind, pg).value;
  const double chi2 = chi2_1d(pg).value;
  const double approx = 0.5 * curvature * chi2;
  return {d_f, approx, std::abs(d_f - approx), chi2, pg.eps};
}

}  // namespace subadd
