#pragma once

#include <iosfwd>

#include "qgibbs/bayesnet.hpp"

namespace qgibbs {

/// Largest state space for which kernels are built densely (N_S ≤ 256).
inline constexpr int kMaxKernelBits = 8;

enum class KernelKind { Stochastic, NonStochastic };

/// Dense kernel K(y|x) stored as entries(y, x): column x is the distribution
/// (or, for Λ and M_hyb, the amplitude profile) of the next state given x.
struct TransitionMatrix {
  RealMatrix entries;
  KernelKind kind = KernelKind::Stochastic;

  Eigen::Index size() const { return entries.rows(); }
  double operator()(Eigen::Index y, Eigen::Index x) const { return entries(y, x); }
};

/// Forward Gibbs sweep: M1(y|x) = ∏_i P(y_i | y_{<i}, x_{>i}).
TransitionMatrix build_M1(const BayesianNetwork& net);
/// Reversed sweep obtained by swapping x and y in the conditioned arguments:
/// M2(y|x) = ∏_i P(y_i | x_{<i}, y_{>i}), last node resampled first.
TransitionMatrix build_M2(const BayesianNetwork& net);

/// Λ(y|x) = √M(y|x).
TransitionMatrix build_lambda(const TransitionMatrix& m);

/// M_hyb(y|x) = Λ2(x|y) Λ1(y|x).
TransitionMatrix build_M_hyb(const TransitionMatrix& m1, const TransitionMatrix& m2);

/// max_{x,y} |M1(y|x)π(x) − M2(x|y)π(y)|.
double check_pair_detailed_balance(const TransitionMatrix& m1, const TransitionMatrix& m2,
                                   const RealVector& pi);

/// max |Σ_x M(y|x) p(x) − p(y)|, i.e. ‖M p − p‖∞.
template <typename Derived>
double stationarity_residual(const TransitionMatrix& m, const Eigen::MatrixBase<Derived>& p) {
  return max_abs(m.entries * p - p);
}

/// Eigenstructure of a kernel, sorted m_0 = 1 first then by descending
/// (|m|, Re m, Im m). m_j = e^{iη_j} cos φ_j with φ_j ∈ [0, π/2], η_j ∈ [0, 2π).
struct SpectralData {
  ComplexVector eigenvalues;
  RealVector phi;
  RealVector eta;
  /// δ = 1 − |m_1|.
  double gap = 1.0;
  /// Unit-norm right eigenvectors, column j for m_j. Column 0 has positive sum.
  ComplexMatrix eigenvectors;
  /// max_{j,k} |⟨m_j|m_k⟩ − δ_jk|
  double orthonormality_residual = 0.0;
  /// max |M Mᵀ − Mᵀ M|
  double normality_residual = 0.0;
  /// max_j |e^{iη_j} cos φ_j − m_j|
  double reconstruction_residual = 0.0;
  /// max_j ‖M v_j − m_j v_j‖
  double eigenpair_residual = 0.0;
  /// Dimension of the invertible (Fitting) core; the rest are exact zeros.
  Eigen::Index core_dimension = 0;
  bool self_adjoint = false;
};

/// Dense eigendecomposition. Symmetric input uses a self-adjoint solver;
/// otherwise the nilpotent part is deflated before solving so that defective
/// zero eigenvalues come out exactly zero. Throws SpectrumError if the leading
/// eigenvalue is not 1 and DegenerateTopEigenvalue if a second eigenvalue has
/// modulus within 1e-9 of 1.
SpectralData spectrum(const RealMatrix& m);
inline SpectralData spectrum(const TransitionMatrix& m) { return spectrum(m.entries); }

/// Greedy nearest-neighbour distance between two eigenvalue multisets.
double eigenvalue_multiset_distance(const ComplexVector& a, const ComplexVector& b);

struct SpectraComparison {
  /// Max multiset distance among the spectra of M1, M2, M_hyb.
  double eigenvalue_mismatch = 0.0;
  /// max |M2ᵀ − D⁻¹ M1 D|
  double m2_similarity_residual = 0.0;
  /// max |M_hybᵀ − D^{-1/2} M2 D^{1/2}|
  double hyb_similarity_residual = 0.0;
};

/// Throws SingularPi if any π(x) = 0.
SpectraComparison verify_spectra_equal(const TransitionMatrix& m1, const TransitionMatrix& m2,
                                       const TransitionMatrix& m_hyb, const RealVector& pi);

/// Singular values of M_hyb, descending. W's busy eigenphases are ±2 arccos of
/// these; they coincide with |m_j| only when M_hyb is normal.
RealVector hybrid_singular_values(const TransitionMatrix& m_hyb);

/// One forward sweep resampling nodes 0..n-1 from their full conditionals.
Assignment classical_gibbs_step(const BayesianNetwork& net, const Assignment& x, Rng& rng);

/// Rows "y,x,value" with a header line.
void write_csv(std::ostream& out, const TransitionMatrix& m);

}  // namespace qgibbs
