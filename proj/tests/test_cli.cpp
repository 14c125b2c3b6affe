#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "subadd/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "subadd");
  std::ostringstream out, err;
  const int code = subadd::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("subadd_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const json& doc) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << doc.dump();
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::string bern(const std::string& name, double one) {
  return write(name, {{"type", "table"}, {"cardinalities", {2}}, {"probs", {1.0 - one, one}}});
}

}  // namespace

TEST_CASE("divergence of two tables") {
  const auto r = run({"divergence", "--kind", "tv", "--p", bern("a.json", 0.3), "--q", bern("b.json", 0.7)});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["value"].get<double>() == doctest::Approx(0.4));
  CHECK(doc["infinite"] == false);

  const auto inf = run({"divergence", "--kind", "kl", "--p", bern("c.json", 0.5), "--q", bern("d.json", 1.0)});
  REQUIRE(inf.code == 0);
  CHECK(json::parse(inf.out)["value"].is_null());
  CHECK(json::parse(inf.out)["infinite"] == true);
}

TEST_CASE("bad input exits with code 2 and names the field") {
  const auto bad = write("bad.json", {{"type", "table"}, {"cardinalities", {2}}, {"probs", {0.5, "x"}}});
  const auto r = run({"divergence", "--kind", "kl", "--p", bad, "--q", bern("e.json", 0.5)});
  CHECK(r.code == 2);
  CHECK(r.err.find("probs[1]") != std::string::npos);

  CHECK(run({"divergence", "--kind", "bogus", "--p", bern("f.json", 0.5), "--q", bern("g.json", 0.5)}).code == 2);
  CHECK(run({"verify", "--example", "nowhere"}).code == 2);
  CHECK(run({"--no-such-flag"}).code == 2);
  CHECK(run({"divergence", "--kind", "kl", "--p", "/nonexistent.json", "--q", bern("h.json", 0.5)}).code == 2);
}

TEST_CASE("verify writes a CSV grid and reports the outcome") {
  const auto r = run({"verify", "--example", "h2", "--kind", "kl", "--grid", "3"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "x,y,gap");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 9);
  const auto summary = json::parse(r.err);
  CHECK(summary["violations"] == 0);
  CHECK(summary["pass"] == true);
}

TEST_CASE("verify on the counter-example: exit 1 when some cell does not violate") {
  CHECK(run({"verify", "--example", "counter", "--grid", "5"}).code == 0);
  // with a huge tolerance nothing counts as a violation
  CHECK(run({"--tol", "1", "verify", "--example", "counter", "--grid", "5"}).code == 1);
}

TEST_CASE("--out output is byte-deterministic and carries a manifest") {
  const auto out = (scratch() / "grid.csv").string();
  for (const auto& threads : {"1", "2"}) {
    REQUIRE(run({"--out", out, "--threads", threads, "verify", "--example", "h1", "--kind", "h2", "--grid", "5"}).code ==
            0);
  }
  const std::string first = slurp(out);
  REQUIRE(run({"--out", out, "verify", "--example", "h1", "--kind", "h2", "--grid", "5"}).code == 0);
  CHECK(slurp(out) == first);

  const auto manifest = json::parse(slurp(out + ".manifest.json"));
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(subadd::fnv1a64(first)));
  CHECK(manifest["outputs"][out] == std::string("fnv1a64:") + hex);
  CHECK(manifest.contains("wall_time_s"));
  CHECK(manifest["command"].get<std::string>().find("verify") != std::string::npos);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(subadd::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(subadd::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("local-approx at eps = 0 is identically zero") {
  const auto r = run({"local-approx", "--eps", "0", "--kinds", "kl,h2"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "eps,kind,d_f,approx,diff,diff_over_eps3");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    std::getline(cells, cell, ',');
    for (int k = 0; k < 3; ++k) {
      std::getline(cells, cell, ',');
      CHECK(std::stod(cell) == 0.0);
    }
  }
  CHECK(rows == 2);
}

TEST_CASE("wasserstein and decompose subcommands") {
  const auto p = write("p.json", {{"type", "table"}, {"cardinalities", {3}}, {"probs", {1, 0, 0}},
                                  {"embedding", {{{0.0}, {1.0}, {4.0}}}}});
  const auto q = write("q.json", {{"type", "table"}, {"cardinalities", {3}}, {"probs", {0, 0, 1}},
                                  {"embedding", {{{0.0}, {1.0}, {4.0}}}}});
  const auto w = run({"wasserstein", "--p", p, "--q", q, "--order", "2", "--plan"});
  REQUIRE(w.code == 0);
  const auto doc = json::parse(w.out);
  CHECK(doc["value"].get<double>() == doctest::Approx(4.0));

  const auto ar = write("ar.json", {{"type", "ar"}, {"n", 4}, {"p", 2}, {"coeffs", {0.0, 1.0}}, {"initials", {0.5, 0.5}}});
  const auto d = run({"decompose", "--model", ar, "--mode", "truncated"});
  REQUIRE(d.code == 0);
  CHECK(json::parse(d.out)["neighborhoods"] == json{{0, 1, 2}, {1, 2, 3}});
}

TEST_CASE("selfcheck passes") {
  CHECK(run({"--seed", "7", "selfcheck", "--trials", "50"}).code == 0);
}
