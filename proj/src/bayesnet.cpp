#include "qgibbs/bayesnet.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qgibbs {

ZeroConditioningEvent::ZeroConditioningEvent(int node, std::vector<int> configuration)
    : Error([&] {
        std::ostringstream os;
        os << "conditioning event of probability zero for node " << node << " at configuration (";
        for (std::size_t k = 0; k < configuration.size(); ++k) os << (k ? "," : "") << configuration[k];
        os << ")";
        return os.str();
      }()),
      node_(node),
      configuration_(std::move(configuration)) {}

namespace {

constexpr double kNormalisationTol = 1e-12;
// Matrix construction is dense over N_S x N_S.
constexpr int kMaxStateBits = 16;

std::string node_field(const NodeSpec& spec, std::size_t i) {
  return "nodes[" + std::to_string(i) + "]" + (spec.name.empty() ? "" : " (" + spec.name + ")");
}

}  // namespace

BayesianNetwork::BayesianNetwork(std::vector<NodeSpec> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ParseError("nodes", "network has no nodes");
  std::set<std::string> names;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const NodeSpec& spec = nodes_[i];
    const std::string field = node_field(spec, i);
    if (spec.cardinality < 2 || !is_power_of_two(static_cast<std::uint64_t>(spec.cardinality))) {
      throw ParseError(field + ".cardinality", "must be a power of two >= 2, got " +
                                                   std::to_string(spec.cardinality));
    }
    if (!spec.name.empty() && !names.insert(spec.name).second) {
      throw ParseError(field + ".name", "duplicate node name");
    }
    std::set<int> seen;
    long rows = 1;
    for (int p : spec.parents) {
      if (p < 0 || static_cast<std::size_t>(p) >= i) {
        throw ParseError(field + ".parents", "parents must precede the node (topological order)");
      }
      if (!seen.insert(p).second) throw ParseError(field + ".parents", "duplicate parent");
      rows *= nodes_[static_cast<std::size_t>(p)].cardinality;
    }
    if (spec.cpt.rows() != rows || spec.cpt.cols() != spec.cardinality) {
      throw ParseError(field + ".cpt", "expected " + std::to_string(rows) + " rows of " +
                                           std::to_string(spec.cardinality) + " entries");
    }
    for (Eigen::Index r = 0; r < spec.cpt.rows(); ++r) {
      const std::string row_field = field + ".cpt[" + std::to_string(r) + "]";
      if ((spec.cpt.row(r).array() < 0.0).any() || !spec.cpt.row(r).allFinite()) {
        throw ParseError(row_field, "negative or non-finite probability");
      }
      if (std::abs(spec.cpt.row(r).sum() - 1.0) > kNormalisationTol) {
        throw ParseError(row_field, "row does not sum to 1");
      }
    }
    n_bits_ += spec.bits();
  }
  if (n_bits_ > kMaxStateBits) throw ParseError("nodes", "more than 16 state bits");

  offsets_.assign(nodes_.size(), 0);
  int offset = 0;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    offsets_[i] = offset;
    offset += nodes_[i].bits();
  }
  children_.assign(nodes_.size(), {});
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (int p : nodes_[i].parents) children_[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
  }
}

int BayesianNetwork::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int BayesianNetwork::parent_config(int i, const Assignment& x) const {
  int config = 0;
  for (int p : node(i).parents) config = config * node(p).cardinality + x[static_cast<std::size_t>(p)];
  return config;
}

StateIndex pack(const BayesianNetwork& net, const Assignment& x) {
  StateIndex index = 0;
  for (int i = 0; i < net.size(); ++i) {
    index |= static_cast<StateIndex>(x[static_cast<std::size_t>(i)]) << net.bit_offset(i);
  }
  return index;
}

Assignment unpack(const BayesianNetwork& net, StateIndex index) {
  Assignment x(static_cast<std::size_t>(net.size()));
  for (int i = 0; i < net.size(); ++i) {
    x[static_cast<std::size_t>(i)] =
        static_cast<int>((index >> net.bit_offset(i)) & static_cast<StateIndex>(net.node(i).cardinality - 1));
  }
  return x;
}

bool is_valid(const BayesianNetwork& net, const Assignment& x) {
  if (x.size() != static_cast<std::size_t>(net.size())) return false;
  for (int i = 0; i < net.size(); ++i) {
    const int v = x[static_cast<std::size_t>(i)];
    if (v < 0 || v >= net.node(i).cardinality) return false;
  }
  return true;
}

double joint_probability(const BayesianNetwork& net, const Assignment& x) {
  double p = 1.0;
  for (int i = 0; i < net.size() && p > 0.0; ++i) p *= net.conditional(i, x);
  return p;
}

RealVector joint_distribution(const BayesianNetwork& net) {
  RealVector pi(static_cast<Eigen::Index>(net.n_states()));
  for (StateIndex s = 0; s < net.n_states(); ++s) {
    pi(static_cast<Eigen::Index>(s)) = joint_probability(net, unpack(net, s));
  }
  return pi;
}

std::vector<int> markov_blanket(const BayesianNetwork& net, int i) {
  std::set<int> blanket(net.node(i).parents.begin(), net.node(i).parents.end());
  for (int c : net.children(i)) {
    blanket.insert(c);
    blanket.insert(net.node(c).parents.begin(), net.node(c).parents.end());
  }
  blanket.erase(i);
  return {blanket.begin(), blanket.end()};
}

RealVector full_conditional(const BayesianNetwork& net, int i, const Assignment& rest) {
  const NodeSpec& spec = net.node(i);
  Assignment x = rest;
  RealVector weights(spec.cardinality);
  for (int v = 0; v < spec.cardinality; ++v) {
    x[static_cast<std::size_t>(i)] = v;
    double w = net.conditional(i, x);
    for (int c : net.children(i)) w *= net.conditional(c, x);
    weights(v) = w;
  }
  const double total = weights.sum();
  if (!(total > 0.0)) {
    x[static_cast<std::size_t>(i)] = rest[static_cast<std::size_t>(i)];
    throw ZeroConditioningEvent(i, x);
  }
  return weights / total;
}

Assignment find_support_point(const BayesianNetwork& net) {
  Assignment x(static_cast<std::size_t>(net.size()), 0);
  for (int i = 0; i < net.size(); ++i) {
    const auto row = net.node(i).cpt.row(net.parent_config(i, x));
    Eigen::Index best = 0;
    for (Eigen::Index v = 1; v < row.size(); ++v) {
      if (row(v) > row(best)) best = v;
    }
    x[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return x;
}

}  // namespace qgibbs
