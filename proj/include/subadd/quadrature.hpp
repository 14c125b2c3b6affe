#pragma once

#include <functional>

namespace subadd {

struct QuadratureResult {
  double value;
  long evaluations;
};

/// Adaptive Simpson with Richardson correction. The interval is first cut into
/// `panels` equal pieces; each is bisected until the local error estimate is
/// below its share of rel_tol * |integral estimate|. Throws
/// QuadratureNonConvergence past `max_depth` bisections.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol = 1e-10, int panels = 64, int max_depth = 48);

}  // namespace subadd
