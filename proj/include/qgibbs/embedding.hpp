#pragma once

#include <string>
#include <vector>

#include "qgibbs/bayesnet.hpp"
#include "qgibbs/chains.hpp"
#include "qgibbs/statevector.hpp"

namespace qgibbs {

/// Two nb-qubit registers. R2 holds qubits [0, nb), R1 holds [nb, 2nb), so the
/// walk basis index is r1·N_S + r2. Sample states live as |0⟩_R1 ⊗ |x⟩_R2.
struct RegisterLayout {
  int nb = 0;

  int r2_offset() const { return 0; }
  int r1_offset() const { return nb; }
  int n_qubits() const { return 2 * nb; }
  StateIndex n_states() const { return StateIndex{1} << nb; }
  StateIndex dimension() const { return StateIndex{1} << (2 * nb); }
  StateIndex index(StateIndex r1, StateIndex r2) const { return (r1 << nb) | r2; }
  std::uint64_t r1_mask() const { return bit_range(nb, nb); }
  std::uint64_t r2_mask() const { return bit_range(0, nb); }
};

RegisterLayout layout_for(const BayesianNetwork& net);

/// Dense embeddings are built up to nb = 5 (dimension 1024).
inline constexpr int kMaxDenseEmbeddingBits = 5;

/// How the undefined columns of a q-embedding are filled in.
///   GramSchmidt: orthonormalise the standard basis, in index order, against
///                the defined columns of the whole operator.
///   Multiplexor: the product of per-node multiplexors, each block completed
///                locally (a Ry rotation for one-qubit targets).
enum class Completion { GramSchmidt, Multiplexor };

enum class GateKind { RotationY, Dense };

/// Uniformly controlled block Σ_b B_b ⊗ |b⟩⟨b|. For RotationY gates
/// B_b = [[cos θ_b, −sin θ_b], [sin θ_b, cos θ_b]].
struct MultiplexorGate {
  GateKind kind = GateKind::RotationY;
  /// Contiguous, ascending; targets[0] is the least significant target bit.
  std::vector<int> targets;
  /// First listed control is the most significant bit of b.
  std::vector<int> controls;
  std::vector<double> angles;
  /// One block per control configuration; filled for both kinds.
  std::vector<RealMatrix> blocks;

  // Provenance.
  int node = -1;
  std::vector<int> control_nodes;
  int undefined_configurations = 0;
};

/// Gates in application order (first entry acts first).
struct GateList {
  int which = 1;
  RegisterLayout layout;
  std::vector<MultiplexorGate> gates;
};

RealMatrix rotation_y(double theta);

/// Fills in every column not listed in `positions` by orthonormalising the
/// standard basis (in index order) against the columns already present.
RealMatrix complete_isometry(const RealMatrix& columns, const std::vector<Eigen::Index>& positions,
                             Eigen::Index dimension);

/// Block for one conditional table. `table(a, b)` is P(b | a); the result has
/// dimension nsb·nsa with index b·nsa + a and carries √P(b|a) δ_a^ã in its
/// (b̃ = 0, a) columns.
RealMatrix build_node_block(const RealMatrix& table, Completion completion = Completion::GramSchmidt);

/// One gate per node, Markov-blanket controlled. which = 1: node 0 first,
/// target R2, controls R2 for earlier blanket nodes and R1 for later ones.
/// which = 2: node N−1 first, target R1, controls R1 for later nodes and R2
/// for earlier ones. Multi-qubit targets produce Dense gates.
GateList decompose_multiplexors(const BayesianNetwork& net, int which);

/// Whether every gate is a single-qubit rotation.
bool all_rotation_gates(const GateList& gates);

void apply_gates(const GateList& gates, Eigen::Ref<ComplexVector> state, bool inverse,
                 std::uint64_t enable_mask = 0);
RealMatrix dense_matrix(const GateList& gates);

/// U1(|x⟩_R1|0⟩_R2) = |x⟩_R1 (Λ1|x⟩)_R2.
RealMatrix build_U1(const BayesianNetwork& net, Completion completion = Completion::GramSchmidt);
/// U2(|0⟩_R1|y⟩_R2) = (Λ2|y⟩)_R1 |y⟩_R2.
RealMatrix build_U2(const BayesianNetwork& net, Completion completion = Completion::GramSchmidt);
/// Same from a square-root kernel directly (GramSchmidt completion).
RealMatrix build_U1(const TransitionMatrix& lambda1);
RealMatrix build_U2(const TransitionMatrix& lambda2);
/// U = U2† U1.
RealMatrix build_U(const RealMatrix& u1, const RealMatrix& u2);

/// max over defined columns of |⟨y, y′|U1|x, 0⟩ − Λ1(y′|x) δ(y, x)|.
double defined_column_residual_U1(const RealMatrix& u1, const TransitionMatrix& lambda1);
/// max over defined columns of |⟨x′, y′|U2|0, y⟩ − Λ2(x′|y) δ(y′, y)|.
double defined_column_residual_U2(const RealMatrix& u2, const TransitionMatrix& lambda2);

/// S(y, x) = ⟨0, y|U|x, 0⟩, which equals M_hyb(y|x) for any completion.
RealMatrix hybrid_block(const RealMatrix& u);

struct EigenbasisOverlapReport {
  /// max_{j,k} |⟨0, m_j|U|m_k, 0⟩ − m_j δ_jk|. Always computed; without an
  /// orthonormal eigenbasis it is only a diagnostic.
  double residual = 0.0;
  /// |⟨0, √π|U|√π, 0⟩ − 1|, always computed.
  double stationary_residual = 0.0;
  /// Set when the residual is not expected to vanish.
  bool skipped = false;
  std::string skip_reason;
};

/// Asserted only when spectral.orthonormality_residual < 1e-6.
EigenbasisOverlapReport verify_eigenbasis_overlap(const RealMatrix& u, const SpectralData& spectral, const RealVector& pi);

/// Both gate lists of a network; the matrix-free form of U1, U2 and U.
struct Embedding {
  RegisterLayout layout;
  GateList u1;
  GateList u2;
};

Embedding make_embedding(const BayesianNetwork& net);

void apply_U1(const Embedding& e, Eigen::Ref<ComplexVector> state, bool inverse = false, std::uint64_t enable_mask = 0);
void apply_U2(const Embedding& e, Eigen::Ref<ComplexVector> state, bool inverse = false, std::uint64_t enable_mask = 0);
/// U = U2†U1; the inverse applies U2 then U1†.
void apply_U(const Embedding& e, Eigen::Ref<ComplexVector> state, bool inverse = false, std::uint64_t enable_mask = 0);

/// Line-oriented text, one gate per line:
///   MUXRY target=<q> controls=<q,...> angles=<csv>
///   MUXDENSE target=<q,...> controls=<q,...> blocks=<csv, row-major per config>
/// preceded by a "# qgibbs gate list" header with nb and which. Numbers use %.17g.
std::string serialize(const GateList& gates);
/// Throws ParseError naming the line.
GateList parse_gate_list(const std::string& text);

}  // namespace qgibbs
