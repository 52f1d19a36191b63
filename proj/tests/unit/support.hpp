#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "qgibbs/network_io.hpp"

namespace qgibbs::testing {

inline std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name + ".json"; }

inline BayesianNetwork fixture(const std::string& name) { return load_network(fixture_path(name)); }

inline nlohmann::json golden(const std::string& name) {
  std::ifstream in(std::string(GOLDEN_DIR) + "/" + name + ".json");
  if (!in) throw std::runtime_error("missing golden " + name);
  return nlohmann::json::parse(in);
}

inline RealMatrix golden_matrix(const nlohmann::json& rows) {
  RealMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return m;
}

inline RealVector golden_vector(const nlohmann::json& values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = values[static_cast<std::size_t>(i)];
  return v;
}

inline ComplexVector golden_complex(const nlohmann::json& pairs) {
  ComplexVector v(static_cast<Eigen::Index>(pairs.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto& p = pairs[static_cast<std::size_t>(i)];
    v(i) = Complex(p[0].get<double>(), p[1].get<double>());
  }
  return v;
}

// Fixtures with a symmetric M_hyb (independent nodes or an edge carrying no
// dependence).
inline const std::vector<std::string> kNormalFixtures = {"single_node", "single_uniform", "independent2",
                                                         "independent3_uniform", "reversible2"};
inline const std::vector<std::string> kGenericFixtures = {"two_node", "chain3", "collider", "seeded3", "quad2"};
inline const std::vector<std::string> kStarFixtures = {"star_g060", "star_g080", "star_g090", "star_g095"};

inline std::vector<std::string> all_fixtures() {
  std::vector<std::string> out = kNormalFixtures;
  out.insert(out.end(), kGenericFixtures.begin(), kGenericFixtures.end());
  out.insert(out.end(), kStarFixtures.begin(), kStarFixtures.end());
  return out;
}

}  // namespace qgibbs::testing
