#include "subadd/quadrature.hpp"

#include <cmath>
#include <vector>

#include "subadd/error.hpp"

namespace subadd {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  long evaluations = 0;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth) {
      fail(ErrorKind::QuadratureNonConvergence,
           "adaptive Simpson exceeded the bisection depth limit");
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, int panels, int max_depth) {
  if (!(b > a) || panels < 1) fail(ErrorKind::InvalidArgument, "bad quadrature interval");
  Simpson s{f, max_depth};
  const double h = (b - a) / panels;
  std::vector<double> nodes(2 * static_cast<std::size_t>(panels) + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = s.eval(a + 0.5 * h * static_cast<double>(i));

  // composite Simpson estimate sets the absolute target
  double estimate = 0.0;
  for (int k = 0; k < panels; ++k) {
    estimate += h / 6.0 * (nodes[2 * k] + 4.0 * nodes[2 * k + 1] + nodes[2 * k + 2]);
  }
  if (!std::isfinite(estimate)) {
    fail(ErrorKind::QuadratureNonConvergence, "integrand is not finite on the interval");
  }
  const double tol = rel_tol * std::abs(estimate) / panels;

  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + h * k;
    const double hi = lo + h;
    const double fa = nodes[2 * k];
    const double fm = nodes[2 * k + 1];
    const double fb = nodes[2 * k + 2];
    const double whole = h / 6.0 * (fa + 4.0 * fm + fb);
    total += s.refine(lo, hi, fa, fm, fb, whole, tol, 0);
  }
  return {total, s.evaluations};
}

}  // namespace subadd
