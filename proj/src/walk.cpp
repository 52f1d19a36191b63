#include "qgibbs/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qgibbs {

namespace {

// Orthonormal basis of the column span, rank cut at 1e-10 relative.
ComplexMatrix orthonormal_span(const ComplexMatrix& columns) {
  Eigen::JacobiSVD<ComplexMatrix> svd(columns, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  Eigen::Index rank = 0;
  const double cut = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

ComplexVector apply_copy(WalkOperator& walk, const ComplexVector& v) {
  ComplexVector out = v;
  walk.apply(out);
  return out;
}

ComplexVector U_swap(const WalkOperator& walk, const ComplexVector& v) {
  ComplexVector out = swap_registers(v, walk.layout());
  walk.apply_U(out, false);
  return out;
}

// Keeps only the R1 = 0 sector.
ComplexVector project_pihat(const ComplexVector& v, const RegisterLayout& layout) {
  ComplexVector out = ComplexVector::Zero(v.size());
  const auto n = static_cast<Eigen::Index>(layout.n_states());
  out.head(n) = v.head(n);
  return out;
}

ComplexVector predicted_walk_spectrum(const RealVector& phi, Eigen::Index n) {
  ComplexVector out(n * n);
  Eigen::Index k = 0;
  out(k++) = 1.0;
  for (Eigen::Index j = 1; j < phi.size(); ++j) {
    out(k++) = std::polar(1.0, 2.0 * phi(j));
    out(k++) = std::polar(1.0, -2.0 * phi(j));
  }
  while (k < n * n) out(k++) = 1.0;
  return out;
}

}  // namespace

void reflect_pihat(Eigen::Ref<ComplexVector> state, const RegisterLayout& layout, std::uint64_t enable_mask) {
  flip_sign_where(state, layout.r1_mask(), 0, enable_mask);
}

void reflect_picheck(Eigen::Ref<ComplexVector> state, const RegisterLayout& layout, std::uint64_t enable_mask) {
  flip_sign_where(state, layout.r2_mask(), 0, enable_mask);
}

ComplexVector swap_registers(const ComplexVector& state, const RegisterLayout& layout) {
  if (state.size() != static_cast<Eigen::Index>(layout.dimension())) {
    throw DimensionMismatch("swap_registers expects a walk-register vector");
  }
  const auto n = static_cast<Eigen::Index>(layout.n_states());
  ComplexVector out(state.size());
  for (Eigen::Index r1 = 0; r1 < n; ++r1) {
    for (Eigen::Index r2 = 0; r2 < n; ++r2) out(r2 * n + r1) = state(r1 * n + r2);
  }
  return out;
}

WalkOperator::WalkOperator(Embedding embedding) : embedding_(std::move(embedding)), layout_(embedding_->layout) {}

WalkOperator::WalkOperator(RealMatrix dense_u, RegisterLayout layout) : dense_u_(std::move(dense_u)), layout_(layout) {
  if (dense_u_.rows() != static_cast<Eigen::Index>(layout_.dimension()) || dense_u_.cols() != dense_u_.rows()) {
    throw DimensionMismatch("dense U does not match the register layout");
  }
}

void WalkOperator::apply_U(Eigen::Ref<ComplexVector> state, bool inverse, std::uint64_t enable_mask) const {
  if (embedding_) {
    qgibbs::apply_U(*embedding_, state, inverse, enable_mask);
    return;
  }
  const auto dim = static_cast<Eigen::Index>(layout_.dimension());
  if (state.size() % dim != 0) throw DimensionMismatch("state does not contain the walk registers");
  // Walk registers are the low qubits, so each column of this view is one
  // probe configuration.
  Eigen::Map<ComplexMatrix> view(state.data(), dim, state.size() / dim);
  for (Eigen::Index p = 0; p < view.cols(); ++p) {
    if ((static_cast<std::uint64_t>(p * dim) & enable_mask) != enable_mask) continue;
    const ComplexVector column = view.col(p);
    if (inverse) {
      view.col(p) = dense_u_.transpose().cast<Complex>() * column;
    } else {
      view.col(p) = dense_u_.cast<Complex>() * column;
    }
  }
}

void WalkOperator::step(Eigen::Ref<ComplexVector> state, bool inverse, std::uint64_t enable_mask) const {
  if (!inverse) {
    reflect_pihat(state, layout_, enable_mask);
    apply_U(state, true, enable_mask);
    reflect_picheck(state, layout_, enable_mask);
    apply_U(state, false, enable_mask);
  } else {
    apply_U(state, true, enable_mask);
    reflect_picheck(state, layout_, enable_mask);
    apply_U(state, false, enable_mask);
    reflect_pihat(state, layout_, enable_mask);
  }
}

void WalkOperator::apply(Eigen::Ref<ComplexVector> state, std::uint64_t enable_mask) {
  step(state, false, enable_mask);
  ++applications_;
}

void WalkOperator::apply_inverse(Eigen::Ref<ComplexVector> state, std::uint64_t enable_mask) {
  step(state, true, enable_mask);
  ++applications_;
}

RealMatrix WalkOperator::dense() const {
  const auto dim = static_cast<Eigen::Index>(layout_.dimension());
  RealMatrix out(dim, dim);
  ComplexVector column(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    column.setZero();
    column(k) = 1.0;
    step(column, false, 0);
    out.col(k) = column.real();
  }
  return out;
}

RealMatrix walk_matrix(const RealMatrix& u, const RegisterLayout& layout) {
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  if (u.rows() != dim) throw DimensionMismatch("U does not match the register layout");
  RealVector hat = RealVector::Ones(dim), check = RealVector::Ones(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    if ((idx & layout.r1_mask()) == 0) hat(i) = -1.0;
    if ((idx & layout.r2_mask()) == 0) check(i) = -1.0;
  }
  return u * check.asDiagonal() * u.transpose() * hat.asDiagonal();
}

ComplexVector stationary_state(const RealVector& pi, const RegisterLayout& layout) {
  return sector_state(pi.cwiseSqrt().cast<Complex>(), layout);
}

ComplexVector sector_state(const ComplexVector& m, const RegisterLayout& layout) {
  if (m.size() != static_cast<Eigen::Index>(layout.n_states())) throw DimensionMismatch("vector is not N_S long");
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(layout.dimension()));
  out.head(m.size()) = m;
  return out;
}

ComplexMatrix BusyBasis::matrix() const {
  ComplexMatrix out(psi0.size(), static_cast<Eigen::Index>(1 + 2 * psi_plus.size()));
  out.col(0) = psi0;
  for (std::size_t j = 0; j < psi_plus.size(); ++j) {
    out.col(static_cast<Eigen::Index>(1 + 2 * j)) = psi_plus[j];
    out.col(static_cast<Eigen::Index>(2 + 2 * j)) = psi_minus[j];
  }
  return out;
}

BusyBasis busy_basis(const SpectralData& spectral, const RealVector& pi, const WalkOperator& walk) {
  const RegisterLayout& layout = walk.layout();
  const Eigen::Index n = spectral.eigenvalues.size();
  if (n != static_cast<Eigen::Index>(layout.n_states())) throw DimensionMismatch("spectrum does not match layout");
  BusyBasis basis;
  basis.psi0 = stationary_state(pi, layout);
  const Complex i_unit(0.0, 1.0);
  for (Eigen::Index j = 1; j < n; ++j) {
    const double phi = spectral.phi(j), eta = spectral.eta(j);
    if (phi <= 1e-8) throw DegeneratePhase("phi_" + std::to_string(j) + " ~ 0: |m_j| collides with 1");
    const ComplexVector e1 = sector_state(spectral.eigenvectors.col(j), layout);
    const ComplexVector rotated = std::polar(1.0, -eta) * U_swap(walk, e1);
    const double s = std::sin(phi);
    basis.e1.push_back(e1);
    basis.e2.push_back((rotated - std::cos(phi) * e1) / s);
    const Complex scale = i_unit / (std::sqrt(2.0) * s);
    basis.psi_plus.push_back(-scale * (rotated - std::polar(1.0, -phi) * e1));
    basis.psi_minus.push_back(scale * (rotated - std::polar(1.0, phi) * e1));
    basis.phi.push_back(phi);
    basis.eta.push_back(eta);
  }
  return basis;
}

ComplexMatrix busy_subspace(const WalkOperator& walk) {
  const RegisterLayout& layout = walk.layout();
  const auto n = static_cast<Eigen::Index>(layout.n_states());
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  ComplexMatrix columns = ComplexMatrix::Zero(dim, 2 * n);
  for (Eigen::Index y = 0; y < n; ++y) columns(y, y) = 1.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    ComplexVector v = ComplexVector::Zero(dim);
    v(x * n) = 1.0;
    walk.apply_U(v, false);
    columns.col(n + x) = v;
  }
  return orthonormal_span(columns);
}

WalkSpectrumReport verify_walk_spectrum(const TransitionMatrix& m_hyb, const RealVector& pi, WalkOperator& walk,
                                        std::uint64_t seed, int n_perp_samples) {
  const RegisterLayout& layout = walk.layout();
  if (layout.nb > kMaxWalkSpectrumBits) throw DimensionMismatch("walk spectrum diagnostics need nb <= 4");
  const auto n = static_cast<Eigen::Index>(layout.n_states());
  WalkSpectrumReport report;

  const SpectralData spectral = spectrum(m_hyb);
  report.orthonormality_residual = spectral.orthonormality_residual;
  report.normality_residual = spectral.normality_residual;
  report.orthonormal_gate = spectral.orthonormality_residual < 1e-6;

  const ComplexVector psi0 = stationary_state(pi, layout);
  report.psi0_residual = (apply_copy(walk, psi0) - psi0).norm();
  report.u_swap_residual = (U_swap(walk, psi0) - psi0).norm();

  for (Eigen::Index j = 0; j < n; ++j) {
    const ComplexVector mj0 = sector_state(spectral.eigenvectors.col(j), layout);
    const Complex mj = spectral.eigenvalues(j);
    report.sector_projection_residual =
        std::max(report.sector_projection_residual, (project_pihat(U_swap(walk, mj0), layout) - mj * mj0).norm());
    ComplexVector back = mj0;
    walk.apply_U(back, true);
    back = swap_registers(back, layout);
    report.sector_projection_adjoint_residual =
        std::max(report.sector_projection_adjoint_residual, (project_pihat(back, layout) - std::conj(mj) * mj0).norm());

    // Invariance of the plane spanned by |m_j0⟩ and U·SWAP|m_j0⟩.
    ComplexMatrix plane(mj0.size(), 2);
    plane.col(0) = mj0;
    plane.col(1) = U_swap(walk, mj0);
    const ComplexMatrix q = orthonormal_span(plane);
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
      ComplexVector w = q.col(k);
      walk.apply(w);
      report.invariance_residual = std::max(report.invariance_residual, (w - q * (q.adjoint() * w)).norm());
    }
  }

  try {
    const BusyBasis basis = busy_basis(spectral, pi, walk);
    for (std::size_t j = 0; j < basis.psi_plus.size(); ++j) {
      const Complex plus = std::polar(1.0, 2.0 * basis.phi[j]);
      report.eigenpair_residual = std::max(
          {report.eigenpair_residual, (apply_copy(walk, basis.psi_plus[j]) - plus * basis.psi_plus[j]).norm(),
           (apply_copy(walk, basis.psi_minus[j]) - std::conj(plus) * basis.psi_minus[j]).norm()});
    }
    const ComplexMatrix b = basis.matrix();
    report.gram_residual = max_abs(ComplexMatrix(b.adjoint() * b - ComplexMatrix::Identity(b.cols(), b.cols())));
  } catch (const DegeneratePhase&) {
    report.busy_basis_available = false;
  }

  const RealMatrix w = walk.dense();
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(w.cast<Complex>(), false);
  const ComplexVector walk_values = solver.eigenvalues();
  report.spectrum_mismatch = eigenvalue_multiset_distance(walk_values, predicted_walk_spectrum(spectral.phi, n));
  const RealVector sigma = hybrid_singular_values(m_hyb);
  const RealVector singular_phi = sigma.unaryExpr([](double s) { return std::acos(std::clamp(s, 0.0, 1.0)); });
  report.singular_spectrum_mismatch =
      eigenvalue_multiset_distance(walk_values, predicted_walk_spectrum(singular_phi, n));

  const ComplexMatrix busy = busy_subspace(walk);
  report.busy_dimension = busy.cols();
  Rng rng(seed);
  std::normal_distribution<double> normal;
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  for (int s = 0; s < n_perp_samples; ++s) {
    ComplexVector v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v(k) = Complex(normal(rng), normal(rng));
    v -= busy * (busy.adjoint() * v);
    const double norm = v.norm();
    if (norm < 1e-12) continue;
    v /= norm;
    report.perp_invariance_residual = std::max(report.perp_invariance_residual, (apply_copy(walk, v) - v).norm());
  }
  return report;
}

}  // namespace qgibbs
