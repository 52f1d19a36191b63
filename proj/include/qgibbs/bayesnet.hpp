#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qgibbs/errors.hpp"
#include "qgibbs/linalg.hpp"

namespace qgibbs {

/// One node of a discrete Bayesian network.
///
/// `cpt(r, s)` is P(node = s | parents in configuration r). Parent
/// configurations are packed with the first listed parent in the most
/// significant position, each parent contributing log2(cardinality) bits.
struct NodeSpec {
  std::string name;
  int cardinality = 2;
  std::vector<int> parents;
  RealMatrix cpt;

  int bits() const { return log2_exact(static_cast<std::uint64_t>(cardinality)); }
};

/// A value per node, each in [0, cardinality).
using Assignment = std::vector<int>;

/// Immutable discrete Bayesian network over power-of-two cardinalities.
///
/// Nodes are stored in topological order. The packed state index places node
/// 0 in the most significant bit group, so for binary nodes x = (x_0, ..., x_{n-1})
/// packs to the binary number x_0 x_1 ... x_{n-1}.
class BayesianNetwork {
 public:
  /// Validates cardinalities, ordering, CPT shapes and normalisation. Throws
  /// ParseError naming the offending node/row.
  explicit BayesianNetwork(std::vector<NodeSpec> nodes);

  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const NodeSpec& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(nodes_.size()); }

  /// N_S, the number of joint states.
  StateIndex n_states() const { return StateIndex{1} << n_bits_; }
  /// nb = log2(N_S).
  int n_bits() const { return n_bits_; }

  /// Position of the node's least significant bit inside a packed index.
  int bit_offset(int i) const { return offsets_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& children(int i) const { return children_[static_cast<std::size_t>(i)]; }

  /// Index of the node called `name`, or -1.
  int index_of(std::string_view name) const;

  /// Row of node i's CPT selected by the parent values in `x`.
  int parent_config(int i, const Assignment& x) const;
  double conditional(int i, const Assignment& x) const {
    return node(i).cpt(parent_config(i, x), x[static_cast<std::size_t>(i)]);
  }

 private:
  std::vector<NodeSpec> nodes_;
  std::vector<int> offsets_;
  std::vector<std::vector<int>> children_;
  int n_bits_ = 0;
};

StateIndex pack(const BayesianNetwork& net, const Assignment& x);
Assignment unpack(const BayesianNetwork& net, StateIndex index);
bool is_valid(const BayesianNetwork& net, const Assignment& x);

/// π(x) = ∏_i P(x_i | x_parents(i)).
double joint_probability(const BayesianNetwork& net, const Assignment& x);

/// π over every packed state index.
RealVector joint_distribution(const BayesianNetwork& net);

/// parents ∪ children ∪ co-parents of node i, excluding i, ascending.
std::vector<int> markov_blanket(const BayesianNetwork& net, int i);

/// P(x_i = · | x_{not i}) evaluated from the Markov blanket factors. The entry
/// of `rest` at position i is ignored. Throws ZeroConditioningEvent if every
/// candidate joint is zero.
RealVector full_conditional(const BayesianNetwork& net, int i, const Assignment& rest);

/// Greedy ancestral choice: each node takes its most probable value given the
/// already chosen parents (ties to the lowest value). The result has π > 0.
Assignment find_support_point(const BayesianNetwork& net);

}  // namespace qgibbs
