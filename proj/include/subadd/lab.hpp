#pragma once

// Subadditivity bounds, gaps against linear coefficients, MRF clique checks and
// the parameter sweeps over the auto-regressive and Gaussian examples.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subadd/decomposition.hpp"
#include "subadd/divergence.hpp"
#include "subadd/model.hpp"
#include "subadd/transport.hpp"

namespace subadd {

constexpr double kGapTolerance = 1e-9;

/// An f-divergence or a p-Wasserstein distance.
class Measure {
 public:
  static Measure f(GeneratorKind kind) { return Measure(kind, 0.0); }
  static Measure wasserstein(double p);

  bool is_wasserstein() const { return p_ > 0.0; }
  GeneratorKind generator() const { return kind_; }
  double order() const { return p_; }
  std::string name() const;
  friend bool operator==(const Measure&, const Measure&) = default;

 private:
  Measure(GeneratorKind kind, double p) : kind_(kind), p_(p) {}
  GeneratorKind kind_;
  double p_;
};

/// Generator tags plus "w1", "w2" and "w:<p>".
Measure parse_measure(std::string_view text);

/// Divergence value; Wasserstein measures use the metric of the shared space.
double measure_value(const Measure& m, const FiniteDistribution& p, const FiniteDistribution& q);

/// H2, KL, SKL -> 1; JS -> 1/ln 2; TV -> 2; W_p -> 2^{1/p} diam / d_min.
double linear_coefficient(const Measure& m, const MetricTable* metric = nullptr);

struct GapReport {
  double joint = 0.0;
  std::vector<double> locals;
  double coefficient = 1.0;
  double bound = 0.0;  // coefficient * sum(locals)
  double gap = 0.0;    // bound - joint
  bool satisfied = true;
  bool infinite_local = false;  // some local is +inf while the joint is finite
};

GapReport make_gap_report(double joint, std::vector<double> locals, double coefficient,
                          double tol = kGapTolerance);

GapReport subadditivity_bound(const Measure& m, const FiniteDistribution& p,
                              const FiniteDistribution& q, const Decomposition& dec,
                              double coefficient, double tol = kGapTolerance);

struct ContractionComparison {
  GapReport full;
  GapReport contracted;
  bool loosened = false;  // contracted.bound > full.bound + tol
};

/// Bound of `dec` against the bound after contracting nodes s and s+1.
ContractionComparison compare_contraction(const Measure& m, const FiniteDistribution& p,
                                          const FiniteDistribution& q, const Decomposition& dec,
                                          int s, double coefficient, double tol = kGapTolerance);

/// W2(P_XY, Q_XY) + W2(P_YZ, Q_YZ) - W2(P_XYZ, Q_XYZ) for the Gaussian pair.
GapReport counterexample_gap(double x, double y);

struct MrfSklCheck {
  double direct;
  double decomposed;
  double diff;
};

MrfSklCheck mrf_skl_decomposition_check(const Mrf& p, const Mrf& q);

struct MrfW1Check {
  GapReport report;  // joint = SKL, locals = W1 per clique, coefficient = eta_max
  std::vector<double> eta;
};

MrfW1Check mrf_w1_skl_check(const Mrf& p, const Mrf& q, double tol = kGapTolerance);

/// f''(1)/2 times the sum over nodes of chi^2 between parent marginals.
double perturbation_gap_prediction(GeneratorKind kind, const BayesNet& p, const BayesNet& q);

// ---------------------------------------------------------------------------
// Sweeps

enum class Example { H1, H2, Counter };
enum class DecompositionMode { Parents, Truncated, Cliques, Bfs };

Example parse_example(std::string_view text);
DecompositionMode parse_mode(std::string_view text);
std::string_view to_string(Example e);
std::string_view to_string(DecompositionMode m);

/// Inclusive evenly spaced axis.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int count = 1;
  std::vector<double> values() const;
};

Axis default_axis(Example e, int count);

/// The auto-regressive model behind examples H1 and H2 at parameter t.
BayesNet example_model(Example e, double t);

/// Decomposition of `bn` in the given mode; cliques and bfs use the moral graph.
Decomposition decompose(const BayesNet& bn, DecompositionMode mode);

struct SweepGrid {
  std::string x_name = "x";
  std::string y_name = "y";
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> gaps;  // gaps[i * ys.size() + j] for (xs[i], ys[j])
  double coefficient = 1.0;

  std::size_t cells() const { return gaps.size(); }
  double at(std::size_t i, std::size_t j) const { return gaps[i * ys.size() + j]; }
};

/// One cell; the counter-example ignores `m` and `mode` (W2, coefficient 1).
GapReport sweep_cell(Example e, double x, double y, const Measure& m, DecompositionMode mode);

/// Cells are evaluated in parallel; output does not depend on scheduling.
SweepGrid sweep(Example e, const Axis& x, const Axis& y, const Measure& m,
                DecompositionMode mode);
SweepGrid sweep_serial(Example e, const Axis& x, const Axis& y, const Measure& m,
                       DecompositionMode mode);

}  // namespace subadd
