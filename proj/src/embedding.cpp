#include "qgibbs/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qgibbs {

namespace {

void require_dense_size(int nb) {
  if (nb > kMaxDenseEmbeddingBits) {
    throw DimensionMismatch("dense embeddings need nb <= 5, got nb = " + std::to_string(nb));
  }
}

double clamped_sqrt(double p) { return std::sqrt(std::clamp(p, 0.0, 1.0)); }

double angle_for(double p0) {
  // Amplitudes pushed outside [0, 1] by rounding are clamped.
  double c = clamped_sqrt(p0);
  if (c > 1.0 - 1e-15) c = 1.0;
  return std::acos(c);
}

// Register-local qubits of node j, most significant first.
void append_node_qubits(std::vector<int>& out, const BayesianNetwork& net, int j, int register_offset) {
  const int base = register_offset + net.bit_offset(j);
  for (int b = net.node(j).bits() - 1; b >= 0; --b) out.push_back(base + b);
}

MultiplexorGate node_gate(const BayesianNetwork& net, const RegisterLayout& layout, int i, int which) {
  MultiplexorGate gate;
  gate.node = i;
  gate.control_nodes = markov_blanket(net, i);
  const int target_register = which == 1 ? layout.r2_offset() : layout.r1_offset();
  const int bits = net.node(i).bits();
  for (int b = 0; b < bits; ++b) gate.targets.push_back(target_register + net.bit_offset(i) + b);
  gate.kind = bits == 1 ? GateKind::RotationY : GateKind::Dense;

  for (int j : gate.control_nodes) {
    // Earlier blanket nodes are read from R2 and later ones from R1 in both
    // embeddings: U1 has already written y_{<i} to R2, U2 has written x_{>i} to R1.
    append_node_qubits(gate.controls, net, j, j < i ? layout.r2_offset() : layout.r1_offset());
  }

  const std::size_t n_configs = std::size_t{1} << gate.controls.size();
  Assignment rest(static_cast<std::size_t>(net.size()), 0);
  const Eigen::Index width = net.node(i).cardinality;
  for (std::size_t config = 0; config < n_configs; ++config) {
    std::size_t remaining = config;
    for (auto it = gate.control_nodes.rbegin(); it != gate.control_nodes.rend(); ++it) {
      const int card = net.node(*it).cardinality;
      rest[static_cast<std::size_t>(*it)] = static_cast<int>(remaining % static_cast<std::size_t>(card));
      remaining /= static_cast<std::size_t>(card);
    }
    RealVector cond;
    try {
      cond = full_conditional(net, i, rest);
    } catch (const ZeroConditioningEvent&) {
      ++gate.undefined_configurations;
      if (gate.kind == GateKind::RotationY) gate.angles.push_back(0.0);
      gate.blocks.push_back(RealMatrix::Identity(width, width));
      continue;
    }
    if (gate.kind == GateKind::RotationY) {
      gate.angles.push_back(angle_for(cond(0)));
      gate.blocks.push_back(rotation_y(gate.angles.back()));
    } else {
      RealMatrix column = cond.unaryExpr([](double p) { return clamped_sqrt(p); });
      gate.blocks.push_back(complete_isometry(column, {0}, width));
    }
  }
  return gate;
}

}  // namespace

RegisterLayout layout_for(const BayesianNetwork& net) { return RegisterLayout{net.n_bits()}; }

RealMatrix rotation_y(double theta) {
  RealMatrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

RealMatrix complete_isometry(const RealMatrix& columns, const std::vector<Eigen::Index>& positions,
                             Eigen::Index dimension) {
  if (columns.rows() != dimension || columns.cols() != static_cast<Eigen::Index>(positions.size())) {
    throw DimensionMismatch("complete_isometry: column/position mismatch");
  }
  RealMatrix out = RealMatrix::Zero(dimension, dimension);
  RealMatrix basis(dimension, dimension);
  std::vector<bool> taken(static_cast<std::size_t>(dimension), false);
  Eigen::Index count = 0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    out.col(positions[k]) = columns.col(static_cast<Eigen::Index>(k));
    basis.col(count++) = columns.col(static_cast<Eigen::Index>(k));
    taken[static_cast<std::size_t>(positions[k])] = true;
  }
  Eigen::Index next_free = 0;
  for (Eigen::Index e = 0; e < dimension && count < dimension; ++e) {
    RealVector v = RealVector::Unit(dimension, e);
    for (int pass = 0; pass < 2; ++pass) {
      v -= basis.leftCols(count) * (basis.leftCols(count).transpose() * v);
    }
    const double norm = v.norm();
    if (norm < 1e-7) continue;
    v /= norm;
    basis.col(count++) = v;
    while (taken[static_cast<std::size_t>(next_free)]) ++next_free;
    out.col(next_free) = v;
    taken[static_cast<std::size_t>(next_free)] = true;
  }
  return out;
}

RealMatrix build_node_block(const RealMatrix& table, Completion completion) {
  const Eigen::Index nsa = table.rows(), nsb = table.cols();
  const Eigen::Index dim = nsa * nsb;
  if (completion == Completion::GramSchmidt) {
    RealMatrix columns = RealMatrix::Zero(dim, nsa);
    std::vector<Eigen::Index> positions;
    for (Eigen::Index a = 0; a < nsa; ++a) {
      for (Eigen::Index b = 0; b < nsb; ++b) columns(b * nsa + a, a) = clamped_sqrt(table(a, b));
      positions.push_back(a);
    }
    return complete_isometry(columns, positions, dim);
  }
  RealMatrix out = RealMatrix::Zero(dim, dim);
  for (Eigen::Index a = 0; a < nsa; ++a) {
    RealMatrix local;
    if (nsb == 2) {
      local = rotation_y(angle_for(table(a, 0)));
    } else {
      RealMatrix column = table.row(a).transpose().unaryExpr([](double p) { return clamped_sqrt(p); });
      local = complete_isometry(column, {0}, nsb);
    }
    for (Eigen::Index r = 0; r < nsb; ++r) {
      for (Eigen::Index c = 0; c < nsb; ++c) out(r * nsa + a, c * nsa + a) = local(r, c);
    }
  }
  return out;
}

GateList decompose_multiplexors(const BayesianNetwork& net, int which) {
  if (which != 1 && which != 2) throw DimensionMismatch("which must be 1 or 2");
  GateList out;
  out.which = which;
  out.layout = layout_for(net);
  for (int k = 0; k < net.size(); ++k) {
    const int i = which == 1 ? k : net.size() - 1 - k;
    out.gates.push_back(node_gate(net, out.layout, i, which));
  }
  return out;
}

bool all_rotation_gates(const GateList& gates) {
  return std::all_of(gates.gates.begin(), gates.gates.end(),
                     [](const MultiplexorGate& g) { return g.kind == GateKind::RotationY; });
}

void apply_gates(const GateList& gates, Eigen::Ref<ComplexVector> state, bool inverse, std::uint64_t enable_mask) {
  const auto apply_one = [&](const MultiplexorGate& g) {
    apply_multiplexed<double>(state, g.targets.front(), static_cast<int>(g.targets.size()), g.controls, g.blocks,
                              inverse, enable_mask);
  };
  if (!inverse) {
    for (const MultiplexorGate& g : gates.gates) apply_one(g);
  } else {
    for (auto it = gates.gates.rbegin(); it != gates.gates.rend(); ++it) apply_one(*it);
  }
}

RealMatrix dense_matrix(const GateList& gates) {
  require_dense_size(gates.layout.nb);
  const auto dim = static_cast<Eigen::Index>(gates.layout.dimension());
  RealMatrix out(dim, dim);
  ComplexVector column(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    column.setZero();
    column(k) = 1.0;
    apply_gates(gates, column, false);
    out.col(k) = column.real();
  }
  return out;
}

RealMatrix build_U1(const BayesianNetwork& net, Completion completion) {
  require_dense_size(net.n_bits());
  if (completion == Completion::Multiplexor) return dense_matrix(decompose_multiplexors(net, 1));
  return build_U1(build_lambda(build_M1(net)));
}

RealMatrix build_U2(const BayesianNetwork& net, Completion completion) {
  require_dense_size(net.n_bits());
  if (completion == Completion::Multiplexor) return dense_matrix(decompose_multiplexors(net, 2));
  return build_U2(build_lambda(build_M2(net)));
}

RealMatrix build_U1(const TransitionMatrix& lambda1) {
  const Eigen::Index n = lambda1.size();
  require_dense_size(log2_exact(static_cast<std::uint64_t>(n)));
  const Eigen::Index dim = n * n;
  RealMatrix columns = RealMatrix::Zero(dim, n);
  std::vector<Eigen::Index> positions;
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) columns(x * n + y, x) = lambda1(y, x);
    positions.push_back(x * n);
  }
  return complete_isometry(columns, positions, dim);
}

RealMatrix build_U2(const TransitionMatrix& lambda2) {
  const Eigen::Index n = lambda2.size();
  require_dense_size(log2_exact(static_cast<std::uint64_t>(n)));
  const Eigen::Index dim = n * n;
  RealMatrix columns = RealMatrix::Zero(dim, n);
  std::vector<Eigen::Index> positions;
  for (Eigen::Index y = 0; y < n; ++y) {
    for (Eigen::Index x = 0; x < n; ++x) columns(x * n + y, y) = lambda2(x, y);
    positions.push_back(y);
  }
  return complete_isometry(columns, positions, dim);
}

RealMatrix build_U(const RealMatrix& u1, const RealMatrix& u2) {
  if (u1.rows() != u2.rows()) throw DimensionMismatch("U1 and U2 differ in size");
  return u2.transpose() * u1;
}

double defined_column_residual_U1(const RealMatrix& u1, const TransitionMatrix& lambda1) {
  const Eigen::Index n = lambda1.size();
  if (u1.rows() != n * n) throw DimensionMismatch("U1 does not match the kernel size");
  double worst = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    RealVector expected = RealVector::Zero(n * n);
    expected.segment(x * n, n) = lambda1.entries.col(x);
    worst = std::max(worst, max_abs(u1.col(x * n) - expected));
  }
  return worst;
}

double defined_column_residual_U2(const RealMatrix& u2, const TransitionMatrix& lambda2) {
  const Eigen::Index n = lambda2.size();
  if (u2.rows() != n * n) throw DimensionMismatch("U2 does not match the kernel size");
  double worst = 0.0;
  for (Eigen::Index y = 0; y < n; ++y) {
    RealVector expected = RealVector::Zero(n * n);
    for (Eigen::Index x = 0; x < n; ++x) expected(x * n + y) = lambda2(x, y);
    worst = std::max(worst, max_abs(u2.col(y) - expected));
  }
  return worst;
}

RealMatrix hybrid_block(const RealMatrix& u) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(u.rows()))));
  if (n * n != u.rows()) throw DimensionMismatch("U is not N_S^2 dimensional");
  RealMatrix s(n, n);
  for (Eigen::Index x = 0; x < n; ++x) s.col(x) = u.col(x * n).head(n);
  return s;
}

EigenbasisOverlapReport verify_eigenbasis_overlap(const RealMatrix& u, const SpectralData& spectral, const RealVector& pi) {
  EigenbasisOverlapReport report;
  const RealMatrix s = hybrid_block(u);
  if (pi.size() != s.rows()) throw DimensionMismatch("π does not match U");
  const RealVector root = pi.cwiseSqrt();
  report.stationary_residual = std::abs(root.dot(s * root) - 1.0);
  const ComplexMatrix& v = spectral.eigenvectors;
  ComplexMatrix overlap = v.adjoint() * s.cast<Complex>() * v;
  overlap.diagonal() -= spectral.eigenvalues;
  report.residual = max_abs(overlap);
  if (!(spectral.orthonormality_residual < 1e-6)) {
    report.skipped = true;
    report.skip_reason = "non-normal M_hyb";
  }
  return report;
}

Embedding make_embedding(const BayesianNetwork& net) {
  return Embedding{layout_for(net), decompose_multiplexors(net, 1), decompose_multiplexors(net, 2)};
}

void apply_U1(const Embedding& e, Eigen::Ref<ComplexVector> state, bool inverse, std::uint64_t enable_mask) {
  apply_gates(e.u1, state, inverse, enable_mask);
}

void apply_U2(const Embedding& e, Eigen::Ref<ComplexVector> state, bool inverse, std::uint64_t enable_mask) {
  apply_gates(e.u2, state, inverse, enable_mask);
}

void apply_U(const Embedding& e, Eigen::Ref<ComplexVector> state, bool inverse, std::uint64_t enable_mask) {
  if (!inverse) {
    apply_gates(e.u1, state, false, enable_mask);
    apply_gates(e.u2, state, true, enable_mask);
  } else {
    apply_gates(e.u2, state, false, enable_mask);
    apply_gates(e.u1, state, true, enable_mask);
  }
}

// ---- text format ----

namespace {

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

template <typename T, typename F>
std::string join(const std::vector<T>& values, F&& format) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ',';
    out += format(values[k]);
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

int parse_int(const std::string& token, const std::string& field) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ParseError(field, "expected an integer, got '" + token + "'");
  }
}

double parse_double(const std::string& token, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ParseError(field, "expected a number, got '" + token + "'");
  }
}

// key=value pairs after the leading keyword.
std::vector<std::pair<std::string, std::string>> key_values(std::istringstream& in, const std::string& field) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ParseError(field, "expected key=value, got '" + token + "'");
    out.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
  return out;
}

}  // namespace

std::string serialize(const GateList& gates) {
  std::ostringstream out;
  out << "# qgibbs gate list\n";
  out << "# nb=" << gates.layout.nb << " which=" << gates.which << " gates=" << gates.gates.size() << "\n";
  const auto as_int = [](int v) { return std::to_string(v); };
  for (const MultiplexorGate& g : gates.gates) {
    out << "# node=" << g.node << " blanket=" << join(g.control_nodes, as_int)
        << " undefined=" << g.undefined_configurations << "\n";
    if (g.kind == GateKind::RotationY) {
      out << "MUXRY target=" << g.targets.front() << " controls=" << join(g.controls, as_int)
          << " angles=" << join(g.angles, format_double) << "\n";
    } else {
      std::vector<double> entries;
      for (const RealMatrix& b : g.blocks) {
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
          for (Eigen::Index c = 0; c < b.cols(); ++c) entries.push_back(b(r, c));
        }
      }
      out << "MUXDENSE target=" << join(g.targets, as_int) << " controls=" << join(g.controls, as_int)
          << " blocks=" << join(entries, format_double) << "\n";
    }
  }
  return out.str();
}

GateList parse_gate_list(const std::string& text) {
  GateList out;
  bool have_header = false;
  MultiplexorGate pending;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const std::string field = "line " + std::to_string(line_no);
    if (line.empty()) continue;
    std::istringstream in(line);
    std::string keyword;
    in >> keyword;
    if (keyword == "#") {
      std::string first;
      if (!(in >> first)) continue;
      std::istringstream rest(first + " " + std::string(std::istreambuf_iterator<char>(in), {}));
      if (first.rfind("nb=", 0) == 0) {
        for (const auto& [key, value] : key_values(rest, field)) {
          if (key == "nb") out.layout.nb = parse_int(value, field + ".nb");
          if (key == "which") out.which = parse_int(value, field + ".which");
        }
        have_header = true;
      } else if (first.rfind("node=", 0) == 0) {
        for (const auto& [key, value] : key_values(rest, field)) {
          if (key == "node") pending.node = parse_int(value, field + ".node");
          if (key == "blanket") {
            for (const std::string& t : split(value, ',')) pending.control_nodes.push_back(parse_int(t, field + ".blanket"));
          }
          if (key == "undefined") pending.undefined_configurations = parse_int(value, field + ".undefined");
        }
      }
      continue;
    }
    if (keyword != "MUXRY" && keyword != "MUXDENSE") throw ParseError(field, "unknown gate '" + keyword + "'");
    if (!have_header) throw ParseError(field, "gate before the nb header");

    MultiplexorGate gate = std::move(pending);
    pending = MultiplexorGate{};
    gate.kind = keyword == "MUXRY" ? GateKind::RotationY : GateKind::Dense;
    std::vector<double> numbers;
    bool have_target = false, have_controls = false, have_values = false;
    for (const auto& [key, value] : key_values(in, field)) {
      if (key == "target") {
        for (const std::string& t : split(value, ',')) gate.targets.push_back(parse_int(t, field + ".target"));
        have_target = true;
      } else if (key == "controls") {
        for (const std::string& t : split(value, ',')) gate.controls.push_back(parse_int(t, field + ".controls"));
        have_controls = true;
      } else if ((key == "angles" && gate.kind == GateKind::RotationY) ||
                 (key == "blocks" && gate.kind == GateKind::Dense)) {
        for (const std::string& t : split(value, ',')) numbers.push_back(parse_double(t, field + "." + key));
        have_values = true;
      } else {
        throw ParseError(field, "unexpected key '" + key + "'");
      }
    }
    if (!have_target || !have_controls || !have_values) throw ParseError(field, "missing target, controls or values");
    if (gate.targets.empty()) throw ParseError(field + ".target", "empty target");
    if (gate.kind == GateKind::RotationY && gate.targets.size() != 1) {
      throw ParseError(field + ".target", "MUXRY takes one target qubit");
    }
    for (std::size_t k = 1; k < gate.targets.size(); ++k) {
      if (gate.targets[k] != gate.targets[k - 1] + 1) throw ParseError(field + ".target", "targets must be contiguous");
    }
    const int n_qubits = 2 * out.layout.nb;
    for (int q : gate.targets) {
      if (q < 0 || q >= n_qubits) throw ParseError(field + ".target", "qubit out of range");
    }
    for (int q : gate.controls) {
      if (q < 0 || q >= n_qubits) throw ParseError(field + ".controls", "qubit out of range");
      if (std::find(gate.targets.begin(), gate.targets.end(), q) != gate.targets.end()) {
        throw ParseError(field + ".controls", "control overlaps the target");
      }
    }
    const std::size_t n_configs = std::size_t{1} << gate.controls.size();
    if (gate.kind == GateKind::RotationY) {
      if (numbers.size() != n_configs) throw ParseError(field + ".angles", "expected one angle per configuration");
      gate.angles = numbers;
      for (double theta : gate.angles) gate.blocks.push_back(rotation_y(theta));
    } else {
      const auto width = Eigen::Index{1} << gate.targets.size();
      if (numbers.size() != n_configs * static_cast<std::size_t>(width * width)) {
        throw ParseError(field + ".blocks", "expected one square block per configuration");
      }
      std::size_t k = 0;
      for (std::size_t c = 0; c < n_configs; ++c) {
        RealMatrix b(width, width);
        for (Eigen::Index r = 0; r < width; ++r) {
          for (Eigen::Index col = 0; col < width; ++col) b(r, col) = numbers[k++];
        }
        gate.blocks.push_back(std::move(b));
      }
    }
    out.gates.push_back(std::move(gate));
  }
  if (!have_header) throw ParseError("line 1", "missing '# nb=' header");
  return out;
}

}  // namespace qgibbs
