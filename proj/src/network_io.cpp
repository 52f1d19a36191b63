#include "qgibbs/network_io.hpp"

#include <fstream>
#include <sstream>

namespace qgibbs {

using nlohmann::json;

namespace {

const json& require(const json& object, const char* key, const std::string& field) {
  if (!object.is_object() || !object.contains(key)) throw ParseError(field + "." + key, "missing");
  return object.at(key);
}

}  // namespace

BayesianNetwork parse_network(const json& document) {
  const json& nodes = require(document, "nodes", "$");
  if (!nodes.is_array()) throw ParseError("nodes", "must be an array");

  std::vector<NodeSpec> specs;
  specs.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string field = "nodes[" + std::to_string(i) + "]";
    const json& entry = nodes[i];
    NodeSpec spec;

    const json& name = require(entry, "name", field);
    if (!name.is_string()) throw ParseError(field + ".name", "must be a string");
    spec.name = name.get<std::string>();

    const json& card = require(entry, "cardinality", field);
    if (!card.is_number_integer()) throw ParseError(field + ".cardinality", "must be an integer");
    spec.cardinality = card.get<int>();
    if (spec.cardinality < 2 || !is_power_of_two(static_cast<std::uint64_t>(spec.cardinality))) {
      throw ParseError(field + ".cardinality",
                       "must be a power of two >= 2, got " + std::to_string(spec.cardinality));
    }

    long rows = 1;
    if (entry.contains("parents")) {
      const json& parents = entry.at("parents");
      if (!parents.is_array()) throw ParseError(field + ".parents", "must be an array of names");
      for (std::size_t k = 0; k < parents.size(); ++k) {
        const std::string pfield = field + ".parents[" + std::to_string(k) + "]";
        if (!parents[k].is_string()) throw ParseError(pfield, "must be a node name");
        const std::string pname = parents[k].get<std::string>();
        int index = -1;
        for (std::size_t j = 0; j < specs.size(); ++j) {
          if (specs[j].name == pname) index = static_cast<int>(j);
        }
        if (index < 0) throw ParseError(pfield, "unknown or later node '" + pname + "'");
        spec.parents.push_back(index);
        rows *= specs[static_cast<std::size_t>(index)].cardinality;
      }
    }

    const json& cpt = require(entry, "cpt", field);
    if (!cpt.is_array() || static_cast<long>(cpt.size()) != rows) {
      throw ParseError(field + ".cpt", "expected " + std::to_string(rows) + " rows");
    }
    spec.cpt.resize(rows, spec.cardinality);
    for (long r = 0; r < rows; ++r) {
      const std::string rfield = field + ".cpt[" + std::to_string(r) + "]";
      const json& row = cpt[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != spec.cardinality) {
        throw ParseError(rfield, "expected " + std::to_string(spec.cardinality) + " probabilities");
      }
      for (int s = 0; s < spec.cardinality; ++s) {
        if (!row[static_cast<std::size_t>(s)].is_number()) throw ParseError(rfield, "non-numeric entry");
        spec.cpt(r, s) = row[static_cast<std::size_t>(s)].get<double>();
      }
    }
    specs.push_back(std::move(spec));
  }
  return BayesianNetwork(std::move(specs));
}

BayesianNetwork parse_network(const std::string& text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", e.what());
  }
  return parse_network(document);
}

BayesianNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_network(buffer.str());
}

json to_json(const BayesianNetwork& net) {
  json nodes = json::array();
  for (const NodeSpec& spec : net.nodes()) {
    json parents = json::array();
    for (int p : spec.parents) parents.push_back(net.node(p).name);
    json cpt = json::array();
    for (Eigen::Index r = 0; r < spec.cpt.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index s = 0; s < spec.cpt.cols(); ++s) row.push_back(spec.cpt(r, s));
      cpt.push_back(std::move(row));
    }
    nodes.push_back({{"name", spec.name}, {"cardinality", spec.cardinality}, {"parents", parents}, {"cpt", cpt}});
  }
  return {{"nodes", nodes}};
}

}  // namespace qgibbs
