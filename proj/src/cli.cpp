#include "subadd/cli.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "subadd/decomposition.hpp"
#include "subadd/divergence.hpp"
#include "subadd/error.hpp"
#include "subadd/lab.hpp"
#include "subadd/model_io.hpp"
#include "subadd/random_models.hpp"
#include "subadd/transport.hpp"

#ifndef SUBADD_VERSION
#define SUBADD_VERSION "0.0.0"
#endif

namespace subadd {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

struct GlobalOptions {
  std::string out;
  int threads = 0;
  std::uint64_t seed = 20240611;
  double tol = kGapTolerance;
};

struct Context {
  const std::vector<std::string>& args;
  const GlobalOptions& global;
  std::ostream& out;
  std::ostream& err;
  Clock::time_point start;
};

std::string sci(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string join(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (k) s += ' ';
    s += args[k];
  }
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  f << content;
  if (!f) fail(ErrorKind::InvalidArgument, "failed writing '" + path + "'");
}

// Writes `content` to --out (plus a manifest) or to standard output.
void emit(const Context& ctx, const std::string& content, const json& config) {
  if (ctx.global.out.empty()) {
    ctx.out << content;
    return;
  }
  write_file(ctx.global.out, content);
  const double wall =
      std::chrono::duration<double>(Clock::now() - ctx.start).count();
  json manifest = {
      {"command", join(ctx.args)},
      {"config", config},
      {"version", SUBADD_VERSION},
      {"wall_time_s", wall},
      {"outputs", {{ctx.global.out, "fnv1a64:" + hex64(fnv1a64(content))}}},
  };
  write_file(ctx.global.out + ".manifest.json", manifest.dump(2) + "\n");
}

json decomposition_json(const Decomposition& dec) {
  json prov = {{"kind", dec.provenance.name()}};
  switch (dec.provenance.kind) {
    case Provenance::Kind::BfsSeparators: prov["order"] = dec.provenance.order; break;
    case Provenance::Kind::Truncated: prov["s"] = dec.provenance.truncated_at; break;
    case Provenance::Kind::Contracted: {
      json merges = json::array();
      for (const auto& [a, b] : dec.provenance.merges) merges.push_back({a, b});
      prov["merges"] = merges;
      break;
    }
    default: break;
  }
  return {{"neighborhoods", dec.neighborhoods}, {"owners", dec.owners}, {"provenance", prov}};
}

// ---------------------------------------------------------------------------

struct DivergenceArgs {
  std::string kind;
  std::string p;
  std::string q;
};

int cmd_divergence(const Context& ctx, const DivergenceArgs& a) {
  const Measure m = parse_measure(a.kind);
  const auto p = to_distribution(load_model(a.p));
  const auto q = to_distribution(load_model(a.q));
  const double v = measure_value(m, p, q);
  const json doc = {{"kind", m.name()}, {"value", number_or_null(v)}, {"infinite", std::isinf(v)}};
  emit(ctx, doc.dump() + "\n", {{"kind", a.kind}, {"p", a.p}, {"q", a.q}});
  return kExitOk;
}

struct WassersteinArgs {
  std::string p;
  std::string q;
  double order = 1.0;
  bool plan = false;
};

int cmd_wasserstein(const Context& ctx, const WassersteinArgs& a) {
  const auto p = to_distribution(load_model(a.p));
  const auto q = to_distribution(load_model(a.q));
  if (!(p.space() == q.space())) {
    fail(ErrorKind::SpaceMismatch, "--p and --q live on different variable spaces");
  }
  const MetricTable metric = metric_from_space(p.space());
  const auto result = wasserstein_finite(a.order, p, q, metric);
  Matrix cost(metric.d.rows(), metric.d.cols());
  for (std::size_t i = 0; i < cost.rows(); ++i) {
    for (std::size_t j = 0; j < cost.cols(); ++j) cost(i, j) = std::pow(metric.d(i, j), a.order);
  }
  const std::vector<double> pa(p.probs().begin(), p.probs().end());
  const std::vector<double> qa(q.probs().begin(), q.probs().end());
  const CertificateCheck cert = verify_plan(result.plan, pa, qa, cost);
  json doc = {
      {"order", a.order},
      {"value", result.value},
      {"cost", result.plan.cost},
      {"pivots", result.plan.pivots},
      {"certificate",
       {{"primal_residual", cert.primal_residual},
        {"dual_infeasibility", cert.dual_infeasibility},
        {"duality_gap", cert.duality_gap},
        {"ok", cert.ok}}},
  };
  if (a.plan) {
    json rows = json::array();
    for (std::size_t i = 0; i < result.plan.coupling.rows(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < result.plan.coupling.cols(); ++j) {
        row.push_back(result.plan.coupling(i, j));
      }
      rows.push_back(row);
    }
    doc["coupling"] = rows;
  }
  emit(ctx, doc.dump() + "\n", {{"p", a.p}, {"q", a.q}, {"order", a.order}});
  return cert.ok ? kExitOk : kExitViolation;
}

struct GaussianArgs {
  std::string p;
  std::string q;
};

int cmd_w2_gaussian(const Context& ctx, const GaussianArgs& a) {
  const auto p = to_gaussian(load_model(a.p));
  const auto q = to_gaussian(load_model(a.q));
  const json doc = {{"value", wasserstein2_gaussian(p, q)}};
  emit(ctx, doc.dump() + "\n", {{"p", a.p}, {"q", a.q}});
  return kExitOk;
}

struct DecomposeArgs {
  std::string model;
  std::string mode = "parents";
  std::vector<int> contract_at;
  std::vector<int> order;
};

int cmd_decompose(const Context& ctx, const DecomposeArgs& a) {
  const Model model = load_model(a.model);
  const DecompositionMode mode = parse_mode(a.mode);
  Decomposition dec;
  if (const auto* bn = std::get_if<BayesNet>(&model)) {
    if (mode == DecompositionMode::Bfs && !a.order.empty()) {
      dec = bfs_neighborhoods(moral_graph(*bn), a.order);
    } else {
      dec = decompose(*bn, mode);
    }
  } else if (const auto* mrf = std::get_if<Mrf>(&model)) {
    if (mode == DecompositionMode::Cliques) {
      dec = maximal_cliques(mrf->graph());
    } else if (mode == DecompositionMode::Bfs) {
      dec = bfs_neighborhoods(mrf->graph(),
                              a.order.empty() ? natural_bfs_order(mrf->graph()) : a.order);
    } else {
      fail(ErrorKind::InvalidArgument, "--mode " + a.mode + " needs a Bayes-net model");
    }
  } else {
    fail(ErrorKind::InvalidArgument, "decompose needs a bayesnet, ar or mrf model");
  }
  for (int s : a.contract_at) dec = contract(dec, s);
  json doc = decomposition_json(dec);
  doc["model"] = model_type(model);
  doc["mode"] = a.mode;
  emit(ctx, doc.dump() + "\n", {{"model", a.model}, {"mode", a.mode}, {"contract", a.contract_at}});
  return kExitOk;
}

struct VerifyArgs {
  std::string example;
  std::string kind;
  int grid = 0;
  std::string mode = "truncated";
};

int cmd_verify(const Context& ctx, const VerifyArgs& a) {
  const Example example = parse_example(a.example);
  std::string kind = a.kind;
  if (example == Example::Counter) {
    if (kind.empty()) kind = "w2";
    if (parse_measure(kind) != Measure::wasserstein(2.0)) {
      fail(ErrorKind::InvalidArgument, "the counter-example is defined for --kind w2 only");
    }
  } else if (kind.empty()) {
    fail(ErrorKind::InvalidArgument, "--kind is required for example " + a.example);
  }
  const Measure m = parse_measure(kind);
  if (example != Example::Counter) {
    // only measures with a published coefficient can be verified
    const MetricTable unit = metric_from_points({{0.0}, {1.0}});
    linear_coefficient(m, &unit);
  }
  const int n = a.grid > 0 ? a.grid : (example == Example::Counter ? 41 : 21);
  const Axis axis = default_axis(example, n);
  const DecompositionMode mode = parse_mode(a.mode);
  const SweepGrid grid = sweep(example, axis, axis, m, mode);

  std::string csv = "x,y,gap\n";
  double min_gap = std::numeric_limits<double>::infinity();
  double max_gap = -std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  for (std::size_t i = 0; i < grid.xs.size(); ++i) {
    for (std::size_t j = 0; j < grid.ys.size(); ++j) {
      const double g = grid.at(i, j);
      csv += sci(grid.xs[i]) + "," + sci(grid.ys[j]) + "," + sci(g) + "\n";
      min_gap = std::min(min_gap, g);
      max_gap = std::max(max_gap, g);
      if (!(g >= -ctx.global.tol)) ++violations;
    }
  }
  const bool pass = example == Example::Counter ? violations == grid.cells() : violations == 0;
  const std::string mode_name = example == Example::Counter ? "gaussian" : a.mode;
  const json summary = {
      {"example", a.example},
      {"kind", m.name()},
      {"mode", mode_name},
      {"grid", n},
      {"coefficient", grid.coefficient},
      {"cells", grid.cells()},
      {"min_gap", number_or_null(min_gap)},
      {"max_gap", number_or_null(max_gap)},
      {"violations", violations},
      {"tolerance", ctx.global.tol},
      {"pass", pass},
  };
  emit(ctx, csv, {{"example", a.example}, {"kind", m.name()}, {"grid", n}, {"mode", mode_name},
                  {"tol", ctx.global.tol}});
  // the summary goes to stderr when the CSV occupies stdout
  (ctx.global.out.empty() ? ctx.err : ctx.out) << summary.dump() << "\n";
  return pass ? kExitOk : kExitViolation;
}

struct LocalApproxArgs {
  std::vector<double> eps{0.01, 0.005, 0.0025};
  std::vector<std::string> kinds{"kl", "rkl", "skl", "js", "h2", "chi2", "rchi2"};
};

int cmd_local_approx(const Context& ctx, const LocalApproxArgs& a) {
  for (double e : a.eps) {
    if (!(e >= 0.0 && e < 1.0)) {
      fail(ErrorKind::ParameterOutOfRange, "--eps value " + std::to_string(e) + " outside [0, 1)");
    }
  }
  std::vector<GeneratorKind> kinds;
  for (const auto& k : a.kinds) {
    const GeneratorKind g = parse_generator(k);
    generator_curvature(g);  // rejects TV
    kinds.push_back(g);
  }
  std::string csv = "eps,kind,d_f,approx,diff,diff_over_eps3\n";
  for (double e : a.eps) {
    for (const auto& g : kinds) {
      const Chi2Approximation r = chi2_approx_report(g, PerturbedGaussian1D(e));
      const double ratio = e > 0.0 ? r.diff / (e * e * e) : 0.0;
      csv += sci(e) + "," + g.name() + "," + sci(r.d_f) + "," + sci(r.approx) + "," +
             sci(r.diff) + "," + sci(ratio) + "\n";
    }
  }
  emit(ctx, csv, {{"eps", a.eps}, {"kinds", a.kinds}});
  return kExitOk;
}

struct SelfcheckArgs {
  int trials = 100;
};

int cmd_selfcheck(const Context& ctx, const SelfcheckArgs& a) {
  if (a.trials < 1) fail(ErrorKind::ParameterOutOfRange, "--trials must be positive");
  Rng rng(ctx.global.seed);
  const double tol = ctx.global.tol;
  std::size_t pinsker = 0;
  std::size_t js_sandwich = 0;
  std::size_t lp_oracle = 0;
  std::size_t subadditivity = 0;
  std::size_t contractions = 0;
  std::size_t loosened = 0;
  std::uniform_int_distribution<int> support(2, 64);
  std::uniform_int_distribution<int> nodes(2, 6);
  const double ln2 = std::log(2.0);
  for (int t = 0; t < a.trials; ++t) {
    const VariableSpace space({support(rng)});
    const auto p = random_distribution(rng, space, 0.2);
    const auto q = random_distribution(rng, space, 0.2);
    const double h2 = f_divergence(GeneratorKind::Tag::H2, p, q).value;
    const double js = f_divergence(GeneratorKind::Tag::JS, p, q).value;
    const double tv = f_divergence(GeneratorKind::Tag::TV, p, q).value;
    const double kl = f_divergence(GeneratorKind::Tag::KL, p, q).value;
    if (!(tv <= std::sqrt(0.5 * kl) + 1e-12)) ++pinsker;
    if (!(ln2 * h2 <= js + 1e-12 && js <= h2 + 1e-12)) ++js_sandwich;
    const double w = wasserstein_finite(1.0, p, q).value;
    if (!(std::abs(w - wasserstein_1d_oracle(1.0, p, q)) <= 1e-9)) ++lp_oracle;

    const int n = nodes(rng);
    const VariableSpace bspace = random_space(rng, n, 2);
    const auto parents = random_dag(rng, n, 0.5, 3);
    const BayesNet pb = random_bayesnet(rng, bspace, parents);
    const BayesNet qb = random_bayesnet(rng, bspace, parents);
    const auto pj = expand_bayesnet(pb);
    const auto qj = expand_bayesnet(qb);
    const Decomposition dec = bayes_neighborhoods(pb);
    for (const char* k : {"h2", "kl", "skl"}) {
      if (!subadditivity_bound(parse_measure(k), pj, qj, dec, 1.0, tol).satisfied) {
        ++subadditivity;
      }
    }
    std::uniform_int_distribution<int> pick(0, n - 2);
    const auto cmp = compare_contraction(parse_measure("kl"), pj, qj, dec, pick(rng), 1.0, tol);
    ++contractions;
    if (cmp.loosened) ++loosened;
    if (!cmp.contracted.satisfied) ++subadditivity;
  }
  const std::size_t total = pinsker + js_sandwich + lp_oracle + subadditivity;
  const json doc = {
      {"seed", ctx.global.seed},
      {"trials", a.trials},
      {"violations",
       {{"pinsker", pinsker},
        {"js_sandwich", js_sandwich},
        {"lp_vs_quantile", lp_oracle},
        {"bayesnet_subadditivity", subadditivity}}},
      {"contraction", {{"compared", contractions}, {"loosened", loosened}}},
      {"pass", total == 0},
  };
  emit(ctx, doc.dump() + "\n", {{"seed", ctx.global.seed}, {"trials", a.trials}});
  return total == 0 ? kExitOk : kExitViolation;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Divergence subadditivity laboratory"};
  app.set_version_flag("--version", SUBADD_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--out", global.out, "Write the primary output here (plus a .manifest.json)");
  app.add_option("--threads", global.threads, "Worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", global.seed, "Seed for randomized suites");
  app.add_option("--tol", global.tol, "Violation tolerance (gap < -tol counts)")
      ->check(CLI::NonNegativeNumber);

  DivergenceArgs div;
  auto* c_div = app.add_subcommand("divergence", "f-divergence or Wasserstein distance of two models");
  c_div->add_option("--kind", div.kind, "kl, rkl, skl, js, h2, tv, chi2, rchi2, alpha:<a>, w1, w2, w:<p>")
      ->required();
  c_div->add_option("--p", div.p, "Model file for P")->required();
  c_div->add_option("--q", div.q, "Model file for Q")->required();

  WassersteinArgs was;
  auto* c_was = app.add_subcommand("wasserstein", "Exact W_p with an optimality certificate");
  c_was->add_option("--p", was.p, "Model file for P")->required();
  c_was->add_option("--q", was.q, "Model file for Q")->required();
  c_was->add_option("--order", was.order, "Order p >= 1")->capture_default_str();
  c_was->add_flag("--plan", was.plan, "Include the optimal coupling");

  GaussianArgs gau;
  auto* c_gau = app.add_subcommand("w2-gaussian", "Closed-form W2 between Gaussian model files");
  c_gau->add_option("--p", gau.p, "Gaussian model file for P")->required();
  c_gau->add_option("--q", gau.q, "Gaussian model file for Q")->required();

  DecomposeArgs dec;
  auto* c_dec = app.add_subcommand("decompose", "Local-neighborhood decomposition of a model");
  c_dec->add_option("--model", dec.model, "Model file")->required();
  c_dec->add_option("--mode", dec.mode, "parents, truncated, cliques or bfs")->capture_default_str();
  c_dec->add_option("--contract", dec.contract_at, "Contract nodes s and s+1 (comma list, applied in order)")
      ->delimiter(',');
  c_dec->add_option("--order", dec.order, "BFS ordering (comma list)")->delimiter(',');

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Sweep an example grid and count violations");
  c_ver->add_option("--example", ver.example, "h1, h2 or counter")->required();
  c_ver->add_option("--kind", ver.kind, "h2, kl, skl, js, tv, w1, w2");
  c_ver->add_option("--grid", ver.grid, "Points per axis (21, or 41 for counter)")
      ->check(CLI::PositiveNumber);
  c_ver->add_option("--mode", ver.mode, "parents, truncated, cliques or bfs")->capture_default_str();

  LocalApproxArgs loc;
  auto* c_loc = app.add_subcommand("local-approx", "Chi-square approximation on the perturbed Gaussian");
  c_loc->add_option("--eps", loc.eps, "Perturbation sizes (comma list)")->delimiter(',');
  c_loc->add_option("--kinds", loc.kinds, "Generators (comma list)")->delimiter(',');

  SelfcheckArgs self;
  auto* c_self = app.add_subcommand("selfcheck", "Randomized inequality checks seeded by --seed");
  c_self->add_option("--trials", self.trials, "Random instances")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  if (global.threads > 0) omp_set_num_threads(global.threads);
  const Context ctx{args, global, out, err, Clock::now()};
  try {
    if (c_div->parsed()) return cmd_divergence(ctx, div);
    if (c_was->parsed()) return cmd_wasserstein(ctx, was);
    if (c_gau->parsed()) return cmd_w2_gaussian(ctx, gau);
    if (c_dec->parsed()) return cmd_decompose(ctx, dec);
    if (c_ver->parsed()) return cmd_verify(ctx, ver);
    if (c_loc->parsed()) return cmd_local_approx(ctx, loc);
    if (c_self->parsed()) return cmd_selfcheck(ctx, self);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace subadd
