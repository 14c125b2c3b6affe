#pragma once

// JSON model files. Node indices are 0-based; tables are row-major with the
// first listed variable slowest.
//
//   {"type":"bayesnet", "cardinalities":[2,2], "parents":[[],[0]],
//    "cpts":[[0.3,0.7], [[0.9,0.1],[0.2,0.8]]]}
//   {"type":"mrf", "cardinalities":[2,2], "cliques":[[0,1]], "potentials":[[2,1,1,2]]}
//   {"type":"table", "cardinalities":[2], "probs":[0.3,0.7]}
//   {"type":"ar", "n":4, "p":2, "coeffs":[0,1], "initials":[0.5,0.5]}
//   {"type":"gaussian", "mean":[0,0], "cov":[[1,0],[0,1]]}
//
// Discrete models accept an optional "embedding": embedding[var][state] is a
// number or a coordinate array. CPT and potential tables may be flat or nested.

#include <string>
#include <variant>

#include <json.hpp>

#include "subadd/gaussian.hpp"
#include "subadd/model.hpp"

namespace subadd {

using Model = std::variant<BayesNet, Mrf, FiniteDistribution, GaussianDistribution>;

/// Throws Error(InvalidModel) naming the offending field.
Model parse_model(const nlohmann::json& doc);
Model load_model(const std::string& path);

/// Joint table of a discrete model; Gaussians are rejected.
FiniteDistribution to_distribution(const Model& model);
GaussianDistribution to_gaussian(const Model& model);

std::string model_type(const Model& model);

}  // namespace subadd
