#include "subadd/model_io.hpp"

#include <fstream>
#include <string>

#include "subadd/error.hpp"

namespace subadd {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  fail(ErrorKind::InvalidModel, "field '" + field + "': " + why);
}

const json& require(const json& doc, const std::string& key) {
  if (!doc.contains(key)) bad_field(key, "missing");
  return doc.at(key);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) bad_field(field, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) bad_field(field, "expected an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) bad_field(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(number(v[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

// Flattens arbitrarily nested numeric arrays in order.
void flatten(const json& v, const std::string& field, std::vector<double>& out) {
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      flatten(v[k], field + "[" + std::to_string(k) + "]", out);
    }
  } else {
    bad_field(field, "expected numbers or nested arrays of numbers");
  }
}

std::vector<int> integers(const json& v, const std::string& field) {
  if (!v.is_array()) bad_field(field, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(integer(v[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::vector<std::vector<int>> index_lists(const json& v, const std::string& field) {
  if (!v.is_array()) bad_field(field, "expected an array of index lists");
  std::vector<std::vector<int>> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(integers(v[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::vector<std::vector<double>> tables(const json& v, const std::string& field) {
  if (!v.is_array()) bad_field(field, "expected one table per entry");
  std::vector<std::vector<double>> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    flatten(v[k], field + "[" + std::to_string(k) + "]", out[k]);
  }
  return out;
}

VariableSpace read_space(const json& doc) {
  const std::vector<int> cards = integers(require(doc, "cardinalities"), "cardinalities");
  if (!doc.contains("embedding")) return VariableSpace(cards);
  const json& emb = doc.at("embedding");
  if (!emb.is_array() || emb.size() != cards.size()) {
    bad_field("embedding", "expected one entry per variable");
  }
  std::vector<std::vector<Coord>> coords(cards.size());
  for (std::size_t var = 0; var < cards.size(); ++var) {
    const std::string field = "embedding[" + std::to_string(var) + "]";
    const json& states = emb[var];
    if (!states.is_array()) bad_field(field, "expected one coordinate per state");
    for (std::size_t s = 0; s < states.size(); ++s) {
      const std::string sf = field + "[" + std::to_string(s) + "]";
      coords[var].push_back(states[s].is_array() ? numbers(states[s], sf)
                                                 : Coord{number(states[s], sf)});
    }
  }
  return VariableSpace(cards, std::move(coords));
}

GaussianDistribution read_gaussian(const json& doc) {
  std::vector<double> mean = numbers(require(doc, "mean"), "mean");
  const json& cov = require(doc, "cov");
  if (!cov.is_array() || cov.size() != mean.size()) {
    bad_field("cov", "expected a square matrix matching the mean");
  }
  Matrix c(mean.size(), mean.size());
  for (std::size_t r = 0; r < mean.size(); ++r) {
    const std::string field = "cov[" + std::to_string(r) + "]";
    const std::vector<double> row = numbers(cov[r], field);
    if (row.size() != mean.size()) bad_field(field, "row length differs from the mean");
    for (std::size_t k = 0; k < row.size(); ++k) c(r, k) = row[k];
  }
  return GaussianDistribution(std::move(mean), std::move(c));
}

}  // namespace

Model parse_model(const json& doc) {
  if (!doc.is_object()) fail(ErrorKind::InvalidModel, "model file must hold a JSON object");
  const json& type_field = require(doc, "type");
  if (!type_field.is_string()) bad_field("type", "expected a string");
  const std::string type = type_field.get<std::string>();
  if (type == "bayesnet") {
    return BayesNet(read_space(doc), index_lists(require(doc, "parents"), "parents"),
                    tables(require(doc, "cpts"), "cpts"));
  }
  if (type == "mrf") {
    return Mrf(read_space(doc), index_lists(require(doc, "cliques"), "cliques"),
               tables(require(doc, "potentials"), "potentials"));
  }
  if (type == "table") {
    std::vector<double> probs;
    flatten(require(doc, "probs"), "probs", probs);
    return FiniteDistribution(read_space(doc), std::move(probs));
  }
  if (type == "ar") {
    ArSpec spec;
    spec.n = integer(require(doc, "n"), "n");
    spec.p = integer(require(doc, "p"), "p");
    spec.coeffs = numbers(require(doc, "coeffs"), "coeffs");
    spec.initials = numbers(require(doc, "initials"), "initials");
    return autoregressive_bayesnet(spec);
  }
  if (type == "gaussian") return read_gaussian(doc);
  bad_field("type", "unknown model type '" + type + "'; valid: bayesnet, mrf, table, ar, gaussian");
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open model file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::InvalidModel, "'" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return parse_model(doc);
  } catch (const Error& e) {
    throw Error(e.kind(), "in '" + path + "': " + e.message());
  }
}

FiniteDistribution to_distribution(const Model& model) {
  if (const auto* bn = std::get_if<BayesNet>(&model)) return expand_bayesnet(*bn);
  if (const auto* m = std::get_if<Mrf>(&model)) return expand_mrf(*m).dist;
  if (const auto* t = std::get_if<FiniteDistribution>(&model)) return *t;
  fail(ErrorKind::InvalidArgument, "expected a discrete model, got a Gaussian");
}

GaussianDistribution to_gaussian(const Model& model) {
  if (const auto* g = std::get_if<GaussianDistribution>(&model)) return *g;
  fail(ErrorKind::InvalidArgument, "expected a Gaussian model, got " + model_type(model));
}

std::string model_type(const Model& model) {
  switch (model.index()) {
    case 0: return "bayesnet";
    case 1: return "mrf";
    case 2: return "table";
    default: return "gaussian";
  }
}

}  // namespace subadd
