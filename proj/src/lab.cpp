#include "subadd/lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <string>

#include "subadd/error.hpp"
#include "subadd/gaussian.hpp"

namespace subadd {

namespace {

using Tag = GeneratorKind::Tag;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-neighborhood metrics are rebuilt from the restricted embedding.
struct BoundPlan {
  std::vector<std::vector<int>> hoods;
  std::vector<MetricTable> local_metrics;
  MetricTable joint_metric;
};

BoundPlan plan_bound(const Measure& m, const VariableSpace& space, const Decomposition& dec) {
  BoundPlan plan;
  plan.hoods = dec.neighborhoods;
  if (m.is_wasserstein()) {
    plan.joint_metric = metric_from_space(space);
    for (const auto& hood : plan.hoods) {
      plan.local_metrics.push_back(metric_from_space(space.restrict_to(hood)));
    }
  }
  return plan;
}

double evaluate(const Measure& m, const FiniteDistribution& p, const FiniteDistribution& q,
                const MetricTable* metric) {
  if (!m.is_wasserstein()) return f_divergence(m.generator(), p, q).value;
  if (metric) return wasserstein_finite(m.order(), p, q, *metric).value;
  return wasserstein_finite(m.order(), p, q).value;
}

GapReport bound_with_plan(const Measure& m, const FiniteDistribution& p,
                          const FiniteDistribution& q, const BoundPlan& plan, double coefficient,
                          double tol) {
  if (!(p.space() == q.space())) {
    fail(ErrorKind::SpaceMismatch, "subadditivity bound needs a shared variable space");
  }
  const double joint =
      evaluate(m, p, q, m.is_wasserstein() ? &plan.joint_metric : nullptr);
  std::vector<double> locals;
  locals.reserve(plan.hoods.size());
  for (std::size_t k = 0; k < plan.hoods.size(); ++k) {
    const auto pm = marginal(p, plan.hoods[k]);
    const auto qm = marginal(q, plan.hoods[k]);
    locals.push_back(evaluate(m, pm, qm, m.is_wasserstein() ? &plan.local_metrics[k] : nullptr));
  }
  return make_gap_report(joint, std::move(locals), coefficient, tol);
}

void check_unit_interval(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    fail(ErrorKind::ParameterOutOfRange,
         std::string(name) + " = " + std::to_string(v) + " must lie in (0, 1)");
  }
}

// Log potential ratio per clique configuration.
std::vector<double> log_ratio(const Mrf& p, const Mrf& q, std::size_t c) {
  const auto& a = p.potential(c);
  const auto& b = q.potential(c);
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = std::log(a[k]) - std::log(b[k]);
  return out;
}

void require_same_structure(const Mrf& p, const Mrf& q) {
  if (!(p.space() == q.space()) || !(p.graph() == q.graph()) || p.cliques() != q.cliques()) {
    fail(ErrorKind::StructureMismatch, "MRFs must share space, graph and cliques");
  }
}

}  // namespace

Measure Measure::wasserstein(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    fail(ErrorKind::ParameterOutOfRange, "Wasserstein order must be a finite p >= 1");
  }
  return Measure(Tag::KL, p);
}

std::string Measure::name() const {
  if (!is_wasserstein()) return kind_.name();
  if (p_ == 1.0) return "w1";
  if (p_ == 2.0) return "w2";
  char buf[64];
  std::snprintf(buf, sizeof buf, "w:%g", p_);
  return buf;
}

Measure parse_measure(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "w1") return Measure::wasserstein(1.0);
  if (s == "w2") return Measure::wasserstein(2.0);
  if (s.rfind("w:", 0) == 0) {
    double p = 0.0;
    const char* first = s.data() + 2;
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, p);
    if (ec == std::errc() && ptr == last && first != last) return Measure::wasserstein(p);
  }
  try {
    return Measure::f(parse_generator(s));
  } catch (const Error&) {
    fail(ErrorKind::InvalidArgument, "unknown measure '" + std::string(text) +
                                         "'; valid tags: " + std::string(valid_generator_tags()) +
                                         ", w1, w2, w:<p>");
  }
}

double measure_value(const Measure& m, const FiniteDistribution& p, const FiniteDistribution& q) {
  return evaluate(m, p, q, nullptr);
}

double linear_coefficient(const Measure& m, const MetricTable* metric) {
  if (m.is_wasserstein()) {
    if (!metric) fail(ErrorKind::MetricRequired, "Wasserstein coefficient needs a metric");
    if (!(metric->d_min > 0.0)) {
      fail(ErrorKind::MetricRequired, "metric has no positive distance");
    }
    return std::pow(2.0, 1.0 / m.order()) * metric->diam / metric->d_min;
  }
  switch (m.generator().tag()) {
    case Tag::H2:
    case Tag::KL:
    case Tag::SKL: return 1.0;
    case Tag::JS: return 1.0 / std::log(2.0);
    case Tag::TV: return 2.0;
    default: break;
  }
  fail(ErrorKind::InvalidArgument, "no linear subadditivity coefficient is known for '" +
                                       m.name() + "'");
}

GapReport make_gap_report(double joint, std::vector<double> locals, double coefficient,
                          double tol) {
  GapReport r;
  r.joint = joint;
  r.coefficient = coefficient;
  double sum = 0.0;
  for (double v : locals) {
    sum += v;
    if (std::isinf(v) && !std::isinf(joint)) r.infinite_local = true;
  }
  r.locals = std::move(locals);
  r.bound = std::isinf(sum) ? kInf : coefficient * sum;
  if (std::isinf(r.bound)) {
    r.gap = kInf;
  } else if (std::isinf(joint)) {
    r.gap = -kInf;
  } else {
    r.gap = r.bound - joint;
  }
  r.satisfied = r.gap >= -tol;
  return r;
}

GapReport subadditivity_bound(const Measure& m, const FiniteDistribution& p,
                              const FiniteDistribution& q, const Decomposition& dec,
                              double coefficient, double tol) {
  if (!(p.space() == q.space())) {
    fail(ErrorKind::SpaceMismatch, "subadditivity bound needs a shared variable space");
  }
  return bound_with_plan(m, p, q, plan_bound(m, p.space(), dec), coefficient, tol);
}

ContractionComparison compare_contraction(const Measure& m, const FiniteDistribution& p,
                                          const FiniteDistribution& q, const Decomposition& dec,
                                          int s, double coefficient, double tol) {
  ContractionComparison out;
  out.full = subadditivity_bound(m, p, q, dec, coefficient, tol);
  out.contracted = subadditivity_bound(m, p, q, contract(dec, s), coefficient, tol);
  out.loosened = out.contracted.bound > out.full.bound + tol;
  return out;
}

GapReport counterexample_gap(double x, double y) {
  const auto [p, q] = counterexample_pair(x, y);
  const std::vector<int> xy{0, 1};
  const std::vector<int> yz{1, 2};
  const double joint = wasserstein2_gaussian(p, q);
  std::vector<double> locals{
      wasserstein2_gaussian(gaussian_marginal(p, xy), gaussian_marginal(q, xy)),
      wasserstein2_gaussian(gaussian_marginal(p, yz), gaussian_marginal(q, yz))};
  return make_gap_report(joint, std::move(locals), 1.0);
}

MrfSklCheck mrf_skl_decomposition_check(const Mrf& p, const Mrf& q) {
  require_same_structure(p, q);
  const FiniteDistribution pj = expand_mrf(p).dist;
  const FiniteDistribution qj = expand_mrf(q).dist;
  const double direct = f_divergence(Tag::SKL, pj, qj).value;
  double decomposed = 0.0;
  for (std::size_t c = 0; c < p.cliques().size(); ++c) {
    const auto pm = marginal(pj, p.cliques()[c]);
    const auto qm = marginal(qj, p.cliques()[c]);
    const auto r = log_ratio(p, q, c);
    for (std::size_t k = 0; k < r.size(); ++k) decomposed += (pm[k] - qm[k]) * r[k];
  }
  return {direct, decomposed, std::abs(direct - decomposed)};
}

MrfW1Check mrf_w1_skl_check(const Mrf& p, const Mrf& q, double tol) {
  require_same_structure(p, q);
  const FiniteDistribution pj = expand_mrf(p).dist;
  const FiniteDistribution qj = expand_mrf(q).dist;
  MrfW1Check out;
  std::vector<double> locals;
  double eta_max = 0.0;
  for (std::size_t c = 0; c < p.cliques().size(); ++c) {
    const auto& clique = p.cliques()[c];
    const VariableSpace sub = p.space().restrict_to(clique);
    const MetricTable metric = metric_from_space(sub);
    const auto r = log_ratio(p, q, c);
    double eta = 0.0;
    for (std::size_t a = 0; a < r.size(); ++a) {
      for (std::size_t b = a + 1; b < r.size(); ++b) {
        const double diff = std::abs(r[a] - r[b]);
        if (diff == 0.0) continue;
        eta = metric.d(a, b) > 0.0 ? std::max(eta, diff / metric.d(a, b)) : kInf;
      }
    }
    out.eta.push_back(eta);
    eta_max = std::max(eta_max, eta);
    locals.push_back(wasserstein_finite(1.0, marginal(pj, clique), marginal(qj, clique), metric).value);
  }
  const double skl = f_divergence(Tag::SKL, pj, qj).value;
  out.report = make_gap_report(skl, std::move(locals), eta_max, tol);
  return out;
}

double perturbation_gap_prediction(GeneratorKind kind, const BayesNet& p, const BayesNet& q) {
  if (!(p.space() == q.space()) || p.all_parents() != q.all_parents()) {
    fail(ErrorKind::StructureMismatch, "Bayes-nets must share space and parents");
  }
  const FiniteDistribution pj = expand_bayesnet(p);
  const FiniteDistribution qj = expand_bayesnet(q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.parents(i).empty()) continue;
    sum += f_divergence(Tag::CHI2, marginal(pj, p.parents(i)), marginal(qj, p.parents(i))).value;
  }
  return 0.5 * generator_curvature(kind) * sum;
}

// ---------------------------------------------------------------------------

Example parse_example(std::string_view text) {
  if (text == "h1") return Example::H1;
  if (text == "h2") return Example::H2;
  if (text == "counter") return Example::Counter;
  fail(ErrorKind::InvalidArgument,
       "unknown example '" + std::string(text) + "'; valid: h1, h2, counter");
}

DecompositionMode parse_mode(std::string_view text) {
  if (text == "parents") return DecompositionMode::Parents;
  if (text == "truncated") return DecompositionMode::Truncated;
  if (text == "cliques") return DecompositionMode::Cliques;
  if (text == "bfs") return DecompositionMode::Bfs;
  fail(ErrorKind::InvalidArgument, "unknown decomposition mode '" + std::string(text) +
                                       "'; valid: parents, truncated, cliques, bfs");
}

std::string_view to_string(Example e) {
  switch (e) {
    case Example::H1: return "h1";
    case Example::H2: return "h2";
    case Example::Counter: return "counter";
  }
  return "unknown";
}

std::string_view to_string(DecompositionMode m) {
  switch (m) {
    case DecompositionMode::Parents: return "parents";
    case DecompositionMode::Truncated: return "truncated";
    case DecompositionMode::Cliques: return "cliques";
    case DecompositionMode::Bfs: return "bfs";
  }
  return "unknown";
}

std::vector<double> Axis::values() const {
  if (count < 1) fail(ErrorKind::ParameterOutOfRange, "axis needs at least one point");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = 0.5 * (lo + hi);
    return out;
  }
  const double step = (hi - lo) / (count - 1);
  for (int k = 0; k < count; ++k) out[k] = lo + step * k;
  out[count - 1] = hi;
  return out;
}

Axis default_axis(Example e, int count) {
  switch (e) {
    case Example::H1: return {-2.0, 2.0, count};
    case Example::H2: return {0.05, 0.95, count};
    case Example::Counter: return {0.025, 0.975, count};
  }
  return {0.0, 1.0, count};
}

BayesNet example_model(Example e, double t) {
  ArSpec spec;
  spec.n = 4;
  spec.p = 2;
  switch (e) {
    case Example::H1:
      if (!std::isfinite(t)) fail(ErrorKind::ParameterOutOfRange, "coefficient must be finite");
      spec.coeffs = {0.0, t};
      spec.initials = {0.5, 0.5};
      break;
    case Example::H2:
      check_unit_interval(t, "initial probability");
      spec.coeffs = {1.0, -1.0};
      spec.initials = {0.5, t};
      break;
    case Example::Counter:
      fail(ErrorKind::InvalidArgument, "the counter-example is Gaussian, not a Bayes-net");
  }
  return autoregressive_bayesnet(spec);
}

Decomposition decompose(const BayesNet& bn, DecompositionMode mode) {
  switch (mode) {
    case DecompositionMode::Parents: return bayes_neighborhoods(bn);
    case DecompositionMode::Truncated: return truncate(bn, bayes_neighborhoods(bn));
    case DecompositionMode::Cliques: return maximal_cliques(moral_graph(bn));
    case DecompositionMode::Bfs: {
      const UndirectedGraph g = moral_graph(bn);
      return bfs_neighborhoods(g, natural_bfs_order(g));
    }
  }
  return bayes_neighborhoods(bn);
}

GapReport sweep_cell(Example e, double x, double y, const Measure& m, DecompositionMode mode) {
  if (e == Example::Counter) return counterexample_gap(x, y);
  const BayesNet pb = example_model(e, x);
  const BayesNet qb = example_model(e, y);
  const FiniteDistribution p = expand_bayesnet(pb);
  const FiniteDistribution q = expand_bayesnet(qb);
  const BoundPlan plan = plan_bound(m, p.space(), decompose(pb, mode));
  const double c = linear_coefficient(m, m.is_wasserstein() ? &plan.joint_metric : nullptr);
  return bound_with_plan(m, p, q, plan, c, kGapTolerance);
}

namespace {

struct SweepSetup {
  SweepGrid grid;
  std::optional<BoundPlan> plan;
  std::vector<FiniteDistribution> px;
  std::vector<FiniteDistribution> qy;
};

SweepSetup prepare_sweep(Example e, const Axis& x, const Axis& y, const Measure& m,
                         DecompositionMode mode) {
  SweepSetup s;
  s.grid.xs = x.values();
  s.grid.ys = y.values();
  s.grid.gaps.assign(s.grid.xs.size() * s.grid.ys.size(), 0.0);
  if (e == Example::Counter) {
    for (double v : s.grid.xs) check_unit_interval(v, "x");
    for (double v : s.grid.ys) check_unit_interval(v, "y");
    s.grid.coefficient = 1.0;
    return s;
  }
  for (double v : s.grid.xs) s.px.push_back(expand_bayesnet(example_model(e, v)));
  for (double v : s.grid.ys) s.qy.push_back(expand_bayesnet(example_model(e, v)));
  const BayesNet shape = example_model(e, e == Example::H2 ? 0.5 : 0.0);
  s.plan = plan_bound(m, s.px.front().space(), decompose(shape, mode));
  s.grid.coefficient =
      linear_coefficient(m, m.is_wasserstein() ? &s.plan->joint_metric : nullptr);
  return s;
}

double cell_gap(const SweepSetup& s, Example e, const Measure& m, std::size_t i, std::size_t j) {
  if (e == Example::Counter) return counterexample_gap(s.grid.xs[i], s.grid.ys[j]).gap;
  return bound_with_plan(m, s.px[i], s.qy[j], *s.plan, s.grid.coefficient, kGapTolerance).gap;
}

}  // namespace

SweepGrid sweep(Example e, const Axis& x, const Axis& y, const Measure& m,
                DecompositionMode mode) {
  SweepSetup s = prepare_sweep(e, x, y, m, mode);
  const std::size_t ny = s.grid.ys.size();
  const long total = static_cast<long>(s.grid.gaps.size());
  std::vector<std::exception_ptr> errors(s.grid.gaps.size());
#pragma omp parallel for schedule(dynamic)
  for (long cell = 0; cell < total; ++cell) {
    const auto c = static_cast<std::size_t>(cell);
    try {
      s.grid.gaps[c] = cell_gap(s, e, m, c / ny, c % ny);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return std::move(s.grid);
}

SweepGrid sweep_serial(Example e, const Axis& x, const Axis& y, const Measure& m,
                       DecompositionMode mode) {
  SweepSetup s = prepare_sweep(e, x, y, m, mode);
  const std::size_t ny = s.grid.ys.size();
  for (std::size_t c = 0; c < s.grid.gaps.size(); ++c) {
    s.grid.gaps[c] = cell_gap(s, e, m, c / ny, c % ny);
  }
  return std::move(s.grid);
}

}  // namespace subadd
