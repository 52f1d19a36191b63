#pragma once

#include "qgibbs/walk.hpp"

namespace qgibbs {

/// Phase-estimation parameters: c blocks of a probe qubits.
struct PEParams {
  int a = 1;
  int c = 1;
  double epsilon2 = 0.0625;
  /// Phase resolution Δ = φ_min / π the probe count was chosen for.
  double resolution = 0.5;
  bool cap_applied = false;

  int probe_qubits() const { return a * c; }
  /// Controlled-W applications in one V: (2^a − 1) per block.
  std::uint64_t walk_steps_per_V() const { return ((std::uint64_t{1} << a) - 1) * static_cast<std::uint64_t>(c); }
  /// The nominal 2^a·c count.
  std::uint64_t nominal_walk_steps_per_V() const { return (std::uint64_t{1} << a) * static_cast<std::uint64_t>(c); }
};

struct QubitBudget {
  int walk_qubits = 0;
  int max_qubits = 24;
  /// Shrink c, then a, instead of throwing.
  bool allow_cap = false;
};

/// φ = arccos(1 − δ), Δ = φ/π, a = ⌈log2(1/Δ)⌉, c = ⌈log2(1/√ε₂)⌉ (both ≥ 1).
/// Callers pass the gap of the walk, 1 − σ_1(M_hyb). Throws BudgetExceeded
/// when 2nb + ac exceeds the budget and capping is not allowed.
PEParams choose_parameters(double delta, double epsilon2, const QubitBudget& budget = {});

/// Throws BudgetExceeded if the parameters need more qubits than allowed.
void check_budget(const PEParams& params, const QubitBudget& budget);

/// Probe qubits sit above the walk registers: block k, bit t is qubit
/// walk_qubits + k·a + t, and bit t carries the controlled W^{2^t}.
struct ProbeLayout {
  int walk_qubits = 0;
  int a = 1;
  int c = 1;

  int qubit(int block, int bit) const { return walk_qubits + block * a + bit; }
  int total_qubits() const { return walk_qubits + a * c; }
  StateIndex dimension() const { return StateIndex{1} << total_qubits(); }
  std::uint64_t probe_mask() const { return bit_range(walk_qubits, a * c); }
};

ProbeLayout probe_layout(const RegisterLayout& walk, const PEParams& params);

/// c phase-estimation blocks: H^{⊗a}, controlled W^{2^t} by repetition,
/// inverse Fourier transform.
void apply_V(Eigen::Ref<ComplexVector> state, WalkOperator& walk, const PEParams& params);
void apply_V_inverse(Eigen::Ref<ComplexVector> state, WalkOperator& walk, const PEParams& params);

/// Negates the component whose probe qubits are all zero.
void apply_Q(Eigen::Ref<ComplexVector> state, const ProbeLayout& probes);

/// R̃_tar = V† Q V.
void apply_R_tar_approx(Eigen::Ref<ComplexVector> state, WalkOperator& walk, const PEParams& params);

/// ψ ⊗ |0^{ac}⟩.
ComplexVector with_probes(const ComplexVector& walk_state, const ProbeLayout& probes);

struct ReflectionError {
  /// ‖(R̃_tar − R_tar ⊗ 1) restricted to V_busy ⊗ |0^{ac}⟩‖₂, over an orthonormal basis of V_busy.
  double operator_error = 0.0;
  /// max ‖R̃_tar(ψ ⊗ 0) − (R_tar ψ) ⊗ 0‖ over ψ0, ψ±j; NaN when the busy basis is unavailable.
  double basis_error = 0.0;
  double sqrt_epsilon2 = 0.0;
};

inline constexpr int kMaxReflectionErrorBits = 3;

/// nb ≤ 3. R_tar = 1 − 2|ψ0⟩⟨ψ0|. `hyb_spectral` supplies the busy basis.
ReflectionError measure_reflection_error(WalkOperator& walk, const RealVector& pi, const SpectralData& hyb_spectral,
                                         const PEParams& params);

}  // namespace qgibbs
