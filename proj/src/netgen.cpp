#include "qgibbs/netgen.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qgibbs {

BayesianNetwork random_network(std::uint64_t seed, const RandomNetOptions& options) {
  if (options.n_nodes < 1) throw std::invalid_argument("need at least one node");
  Rng rng(seed);
  std::vector<NodeSpec> nodes;
  for (int i = 0; i < options.n_nodes; ++i) {
    NodeSpec spec;
    spec.name = "n" + std::to_string(i);
    spec.cardinality = uniform01(rng) < options.quad_probability ? 4 : 2;

    std::vector<int> earlier(static_cast<std::size_t>(i));
    std::iota(earlier.begin(), earlier.end(), 0);
    const int n_parents = std::min<int>(i, static_cast<int>(uniform01(rng) * (options.max_parents + 1)));
    for (int k = 0; k < n_parents; ++k) {
      const auto pick = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(earlier.size()));
      spec.parents.push_back(earlier[pick]);
      earlier.erase(earlier.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    std::sort(spec.parents.begin(), spec.parents.end());

    long rows = 1;
    for (int p : spec.parents) rows *= nodes[static_cast<std::size_t>(p)].cardinality;
    spec.cpt.resize(rows, spec.cardinality);
    for (long r = 0; r < rows; ++r) {
      for (int s = 0; s < spec.cardinality; ++s) {
        spec.cpt(r, s) = options.min_weight + (1.0 - options.min_weight) * uniform01(rng);
      }
      spec.cpt.row(r) /= spec.cpt.row(r).sum();
    }
    nodes.push_back(std::move(spec));
  }
  return BayesianNetwork(std::move(nodes));
}

BayesianNetwork independent_network(const std::vector<double>& p1) {
  std::vector<NodeSpec> nodes;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    NodeSpec spec;
    spec.name = "n" + std::to_string(i);
    spec.cpt.resize(1, 2);
    spec.cpt << 1.0 - p1[i], p1[i];
    nodes.push_back(std::move(spec));
  }
  return BayesianNetwork(std::move(nodes));
}

BayesianNetwork uniform_network(int n) { return independent_network(std::vector<double>(static_cast<std::size_t>(n), 0.5)); }

BayesianNetwork star_network(double coupling, int n_children) {
  if (!(coupling >= 0.0 && coupling < 1.0)) throw std::invalid_argument("coupling must lie in [0, 1)");
  std::vector<NodeSpec> nodes;
  NodeSpec root;
  root.name = "root";
  root.cpt.resize(1, 2);
  root.cpt << 0.5, 0.5;
  nodes.push_back(root);
  const double agree = 0.5 * (1.0 + coupling);
  for (int k = 0; k < n_children; ++k) {
    NodeSpec child;
    child.name = "leaf" + std::to_string(k);
    child.parents = {0};
    child.cpt.resize(2, 2);
    child.cpt << agree, 1.0 - agree, 1.0 - agree, agree;
    nodes.push_back(std::move(child));
  }
  return BayesianNetwork(std::move(nodes));
}

}  // namespace qgibbs
