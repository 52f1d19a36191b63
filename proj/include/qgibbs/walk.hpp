#pragma once

#include <optional>
#include <vector>

#include "qgibbs/chains.hpp"
#include "qgibbs/embedding.hpp"

namespace qgibbs {

/// Negates amplitudes with R1 = 0 (the π̂ sector).
void reflect_pihat(Eigen::Ref<ComplexVector> state, const RegisterLayout& layout, std::uint64_t enable_mask = 0);
/// Negates amplitudes with R2 = 0 (the π̌ sector).
void reflect_picheck(Eigen::Ref<ComplexVector> state, const RegisterLayout& layout, std::uint64_t enable_mask = 0);

/// Exchanges the R1 and R2 registers of a walk-register vector.
ComplexVector swap_registers(const ComplexVector& state, const RegisterLayout& layout);

/// W = U (1 − 2π̌) U† (1 − 2π̂), applied as π̂ reflection, U†, π̌ reflection, U.
///
/// The state may carry extra (probe) qubits above the walk registers; they
/// are passive unless named in `enable_mask`, in which case only components
/// with those bits set are touched (controlled-W). Every call to apply or
/// apply_inverse counts as one W application.
class WalkOperator {
 public:
  /// Matrix-free: U applied gate by gate.
  explicit WalkOperator(Embedding embedding);
  /// Dense U supplied directly, e.g. from a kernel-level construction.
  WalkOperator(RealMatrix dense_u, RegisterLayout layout);

  const RegisterLayout& layout() const { return layout_; }
  bool matrix_free() const { return embedding_.has_value(); }

  void apply(Eigen::Ref<ComplexVector> state, std::uint64_t enable_mask = 0);
  void apply_inverse(Eigen::Ref<ComplexVector> state, std::uint64_t enable_mask = 0);
  /// U or U† alone; not counted.
  void apply_U(Eigen::Ref<ComplexVector> state, bool inverse, std::uint64_t enable_mask = 0) const;

  std::uint64_t applications() const { return applications_; }
  void reset_counter() { applications_ = 0; }

  /// Dense W on the walk registers; not counted.
  RealMatrix dense() const;

 private:
  void step(Eigen::Ref<ComplexVector> state, bool inverse, std::uint64_t enable_mask) const;

  std::optional<Embedding> embedding_;
  RealMatrix dense_u_;
  RegisterLayout layout_;
  std::uint64_t applications_ = 0;
};

/// W from a dense U.
RealMatrix walk_matrix(const RealMatrix& u, const RegisterLayout& layout);

/// ψ0 = |0⟩_R1 ⊗ |√π⟩_R2.
ComplexVector stationary_state(const RealVector& pi, const RegisterLayout& layout);
/// |m0⟩ := |0⟩_R1 ⊗ |m⟩_R2.
ComplexVector sector_state(const ComplexVector& m, const RegisterLayout& layout);

/// Eigenvectors of W built from the eigenvectors of M_hyb:
///   ψ±j = ∓i/(√2 sin φ_j) (e^{−iη_j} U·SWAP|m_j0⟩ − e^{∓iφ_j} |m_j0⟩),
/// with eigenvalue e^{±2iφ_j}. Vectors are indexed j − 1 for j = 1..N_S−1.
struct BusyBasis {
  ComplexVector psi0;
  std::vector<ComplexVector> psi_plus;
  std::vector<ComplexVector> psi_minus;
  /// e1j = |m_j0⟩, e2j the unit vector completing the rotation plane.
  std::vector<ComplexVector> e1;
  std::vector<ComplexVector> e2;
  std::vector<double> phi;
  std::vector<double> eta;

  /// Columns ψ0, ψ+1, ψ−1, ψ+2, ...
  ComplexMatrix matrix() const;
};

/// `spectral` is the spectrum of M_hyb. Throws DegeneratePhase if some
/// φ_j ≤ 1e-8 for j ≠ 0.
BusyBasis busy_basis(const SpectralData& spectral, const RealVector& pi, const WalkOperator& walk);

/// Orthonormal basis of V_busy = span(R1 = 0 sector) + span(U · (R2 = 0 sector)).
ComplexMatrix busy_subspace(const WalkOperator& walk);

struct WalkSpectrumReport {
  double psi0_residual = 0.0;        // ‖Wψ0 − ψ0‖
  double u_swap_residual = 0.0;      // ‖U·SWAP ψ0 − ψ0‖
  double sector_projection_residual = 0.0;      // max_j ‖π̂ U·SWAP|m_j0⟩ − m_j|m_j0⟩‖
  double sector_projection_adjoint_residual = 0.0;  // max_j ‖π̂ SWAP·U†|m_j0⟩ − m_j*|m_j0⟩‖
  double eigenpair_residual = 0.0;   // max_j ‖Wψ±j − e^{±2iφ_j}ψ±j‖
  double gram_residual = 0.0;        // max |Gram(busy basis) − I|
  double invariance_residual = 0.0;  // W leaves span{|m_j0⟩, U·SWAP|m_j0⟩} invariant
  /// Dense W spectrum vs {1} ∪ {e^{±2iφ_j}} ∪ {1}^{(N_S−1)²}, φ_j from M_hyb eigenvalues.
  double spectrum_mismatch = 0.0;
  /// Same with cos φ_k replaced by the singular values of M_hyb.
  double singular_spectrum_mismatch = 0.0;
  /// max ‖Wφ − φ‖ over random φ ⊥ V_busy.
  double perp_invariance_residual = 0.0;
  Eigen::Index busy_dimension = 0;
  /// Eigen-based checks are meaningful only when M_hyb has an orthonormal
  /// eigenbasis.
  bool orthonormal_gate = false;
  bool busy_basis_available = true;
  double orthonormality_residual = 0.0;
  double normality_residual = 0.0;
};

inline constexpr int kMaxWalkSpectrumBits = 4;

/// Dense diagnostics, nb ≤ 4. `seed` drives the random V_busy^⊥ vectors.
WalkSpectrumReport verify_walk_spectrum(const TransitionMatrix& m_hyb, const RealVector& pi, WalkOperator& walk,
                                        std::uint64_t seed = 7, int n_perp_samples = 20);

}  // namespace qgibbs
