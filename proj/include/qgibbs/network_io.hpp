#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qgibbs/bayesnet.hpp"

namespace qgibbs {

/// Network document:
///
///   {"nodes": [{"name": "A", "cardinality": 2, "parents": ["B", ...],
///               "cpt": [[p_0, p_1], ...]}, ...]}
///
/// See docs/network_format.md for the exact layout. Errors are ParseError with
/// a JSON-path-like field, e.g. "nodes[1].cpt[2]".
BayesianNetwork parse_network(const nlohmann::json& document);
BayesianNetwork parse_network(const std::string& text);
BayesianNetwork load_network(const std::filesystem::path& path);

nlohmann::json to_json(const BayesianNetwork& net);

}  // namespace qgibbs
