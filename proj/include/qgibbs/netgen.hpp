#pragma once

#include <cstdint>
#include <vector>

#include "qgibbs/bayesnet.hpp"

namespace qgibbs {

struct RandomNetOptions {
  int n_nodes = 3;
  int max_parents = 2;
  /// Chance that a node gets cardinality 4 instead of 2.
  double quad_probability = 0.0;
  /// CPT entries are drawn uniformly from [min_weight, 1] before normalising.
  double min_weight = 0.05;
};

/// Seeded random DAG in topological order; every CPT entry is positive.
BayesianNetwork random_network(std::uint64_t seed, const RandomNetOptions& options = {});

/// Independent binary nodes with P(node = 1) = p1[i].
BayesianNetwork independent_network(const std::vector<double>& p1);

/// n independent uniform binary nodes.
BayesianNetwork uniform_network(int n);

/// Uniform binary root with `n_children` binary children, each equal to the
/// root with probability (1 + coupling)/2. The gap closes as coupling → 1.
BayesianNetwork star_network(double coupling, int n_children = 3);

}  // namespace qgibbs
