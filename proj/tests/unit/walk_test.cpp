#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "qgibbs/walk.hpp"
#include "support.hpp"

namespace qgibbs {
namespace {

using testing::fixture;

ComplexVector random_state(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v.normalized();
}

ComplexVector basis_state(Eigen::Index dim, StateIndex k) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return v;
}

std::vector<Complex> sorted_values(const ComplexVector& v) {
  std::vector<Complex> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

// Symmetric doubly stochastic kernel: M1 = M2 = M_hyb = M, π uniform.
RealMatrix reversible_kernel() {
  RealMatrix m(4, 4);
  m << 0.4, 0.3, 0.2, 0.1, 0.3, 0.4, 0.1, 0.2, 0.2, 0.1, 0.4, 0.3, 0.1, 0.2, 0.3, 0.4;
  return m;
}

WalkOperator kernel_walk(const RealMatrix& m) {
  const TransitionMatrix root = build_lambda(TransitionMatrix{m});
  return WalkOperator(build_U(build_U1(root), build_U2(root)), RegisterLayout{log2_exact(m.rows())});
}

TEST(Reflections, Examples) {
  const RegisterLayout layout{2};
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  for (auto reflect : {reflect_pihat, reflect_picheck}) {
    ComplexVector zero = basis_state(dim, layout.index(0, 0));
    reflect(zero, layout, 0);
    EXPECT_EQ(zero(0), Complex(-1.0));
    ComplexVector busy = basis_state(dim, layout.index(2, 3));
    reflect(busy, layout, 0);
    EXPECT_EQ(busy(static_cast<Eigen::Index>(layout.index(2, 3))), Complex(1.0));
    const ComplexVector psi = random_state(dim, 4);
    ComplexVector twice = psi;
    reflect(twice, layout, 0);
    reflect(twice, layout, 0);
    EXPECT_LT((twice - psi).norm(), 1e-14);
  }
  // Each projector only sees its own register.
  ComplexVector r2_zero = basis_state(dim, layout.index(1, 0));
  reflect_pihat(r2_zero, layout);
  EXPECT_EQ(r2_zero(static_cast<Eigen::Index>(layout.index(1, 0))), Complex(1.0));
  reflect_picheck(r2_zero, layout);
  EXPECT_EQ(r2_zero(static_cast<Eigen::Index>(layout.index(1, 0))), Complex(-1.0));
}

TEST(Walk, StationaryStateIsFixed) {
  for (const std::string& name : testing::all_fixtures()) {
    const BayesianNetwork net = fixture(name);
    WalkOperator walk(make_embedding(net));
    const ComplexVector psi0 = stationary_state(joint_distribution(net), walk.layout());
    ComplexVector out = psi0;
    walk.apply(out);
    EXPECT_LT((out - psi0).norm(), 1e-10) << name;
  }
}

TEST(Walk, StationaryOverlapWithStart) {
  const BayesianNetwork net = fixture("seeded3");
  const RealVector pi = joint_distribution(net);
  const RegisterLayout layout = layout_for(net);
  const ComplexVector psi0 = stationary_state(pi, layout);
  const StateIndex x0 = pack(net, find_support_point(net));
  EXPECT_NEAR(std::abs(psi0(static_cast<Eigen::Index>(layout.index(0, x0)))), std::sqrt(pi(static_cast<Eigen::Index>(x0))),
              1e-15);
}

TEST(Walk, NormPreservedAndInverse) {
  for (const char* name : {"seeded3", "quad2", "star_g090"}) {
    WalkOperator walk(make_embedding(fixture(name)));
    const ComplexVector psi = random_state(static_cast<Eigen::Index>(walk.layout().dimension()), 9);
    ComplexVector out = psi;
    walk.apply(out);
    EXPECT_LT(std::abs(out.norm() - 1.0), 1e-12) << name;
    walk.apply_inverse(out);
    EXPECT_LT((out - psi).norm(), 1e-12) << name;
    EXPECT_EQ(walk.applications(), 2u);
    walk.reset_counter();
    EXPECT_EQ(walk.applications(), 0u);
  }
}

TEST(Walk, MatrixFreeMatchesDense) {
  for (const char* name : {"single_node", "two_node", "chain3", "seeded3", "quad2"}) {
    const BayesianNetwork net = fixture(name);
    ASSERT_LE(net.n_bits(), 3);
    WalkOperator walk(make_embedding(net));
    const RealMatrix w = walk.dense();
    const Embedding e = make_embedding(net);
    WalkOperator dense_backend(build_U(dense_matrix(e.u1), dense_matrix(e.u2)), e.layout);
    EXPECT_LT(max_abs(w - walk_matrix(build_U(dense_matrix(e.u1), dense_matrix(e.u2)), e.layout)), 1e-12);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const ComplexVector psi = random_state(w.rows(), seed);
      ComplexVector a = psi, b = psi;
      walk.apply(a);
      dense_backend.apply(b);
      EXPECT_LT((a - w.cast<Complex>() * psi).norm(), 1e-10) << name;
      EXPECT_LT((a - b).norm(), 1e-10) << name;
    }
  }
}

TEST(Walk, ControlledApplicationLeavesDisabledBranch) {
  WalkOperator walk(make_embedding(fixture("two_node")));
  const auto dim = static_cast<Eigen::Index>(walk.layout().dimension());
  ComplexVector psi = random_state(2 * dim, 2);
  const ComplexVector before = psi;
  walk.apply(psi, std::uint64_t{1} << walk.layout().n_qubits());
  EXPECT_EQ((psi.head(dim) - before.head(dim)).norm(), 0.0);
  EXPECT_LT((psi.tail(dim) - walk.dense().cast<Complex>() * before.tail(dim)).norm(), 1e-12);
}

TEST(WalkSpectrum, SingleNodeIsPlusMinusOne) {
  WalkOperator walk(make_embedding(fixture("single_node")));
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(walk.dense().cast<Complex>(), false);
  const std::vector<Complex> values = sorted_values(solver.eigenvalues());
  const std::vector<Complex> expected = {-1.0, -1.0, 1.0, 1.0};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_LT(std::abs(values[k] - expected[k]), 1e-12);
}

TEST(WalkSpectrum, UniformTwoNodeMultiplicities) {
  WalkOperator walk(make_embedding(fixture("independent2")));
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(walk.dense().cast<Complex>(), false);
  int plus = 0, minus = 0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const Complex v = solver.eigenvalues()(k);
    if (std::abs(v - 1.0) < 1e-9) ++plus;
    if (std::abs(v + 1.0) < 1e-9) ++minus;
  }
  // ψ0 plus (N_S − 1)² perpendicular ones; three ± pairs at phase π.
  EXPECT_EQ(plus, 1 + 9);
  EXPECT_EQ(minus, 6);
}

TEST(BusyBasis, SingleNodeVectorsAreEigenvectors) {
  const BayesianNetwork net = fixture("single_node");
  const RealVector pi = joint_distribution(net);
  WalkOperator walk(make_embedding(net));
  const BusyBasis basis = busy_basis(spectrum(build_M_hyb(build_M1(net), build_M2(net))), pi, walk);
  ASSERT_EQ(basis.psi_plus.size(), 1u);
  const ComplexMatrix w = walk.dense().cast<Complex>();
  // Projector onto the −1 eigenspace of the dense W.
  const ComplexMatrix minus_projector = 0.5 * (ComplexMatrix::Identity(4, 4) - w);
  for (const ComplexVector& psi : {basis.psi_plus[0], basis.psi_minus[0]}) {
    EXPECT_LT((w * psi + psi).norm(), 1e-12);
    EXPECT_LT((minus_projector * psi - psi).norm(), 1e-12);
  }
  EXPECT_LT(std::abs(basis.psi_plus[0].dot(basis.psi_minus[0])), 1e-12);
}

TEST(BusyBasis, GramIsIdentityOnNormalFixtures) {
  for (const std::string& name : testing::kNormalFixtures) {
    const BayesianNetwork net = fixture(name);
    WalkOperator walk(make_embedding(net));
    const BusyBasis basis = busy_basis(spectrum(build_M_hyb(build_M1(net), build_M2(net))), joint_distribution(net), walk);
    const ComplexMatrix b = basis.matrix();
    EXPECT_EQ(b.cols(), 2 * static_cast<Eigen::Index>(walk.layout().n_states()) - 1);
    EXPECT_LT(max_abs(b.adjoint() * b - ComplexMatrix::Identity(b.cols(), b.cols())), 1e-9) << name;
  }
}

TEST(BusyBasis, DegeneratePhaseThrows) {
  // Two disconnected-ish blocks give m_1 → 1: φ_1 ≈ 0.
  SpectralData s;
  s.eigenvalues = ComplexVector::Ones(2);
  s.phi = RealVector::Zero(2);
  s.eta = RealVector::Zero(2);
  s.eigenvectors = ComplexMatrix::Identity(2, 2);
  WalkOperator walk(make_embedding(fixture("single_uniform")));
  EXPECT_THROW(busy_basis(s, RealVector::Constant(2, 0.5), walk), DegeneratePhase);
}

TEST(BusySubspace, DimensionIsTwoNsMinusOne) {
  for (const std::string& name : testing::all_fixtures()) {
    const BayesianNetwork net = fixture(name);
    if (net.n_bits() > 3) continue;
    WalkOperator walk(make_embedding(net));
    const ComplexMatrix busy = busy_subspace(walk);
    EXPECT_EQ(busy.cols(), 2 * static_cast<Eigen::Index>(net.n_states()) - 1) << name;
    EXPECT_LT(max_abs(busy.adjoint() * busy - ComplexMatrix::Identity(busy.cols(), busy.cols())), 1e-12) << name;
  }
}

TEST(VerifyWalkSpectrum, HardChecksOnAllFixtures) {
  for (const std::string& name : testing::all_fixtures()) {
    const BayesianNetwork net = fixture(name);
    if (net.n_bits() > kMaxWalkSpectrumBits) continue;
    const TransitionMatrix hyb = build_M_hyb(build_M1(net), build_M2(net));
    WalkOperator walk(make_embedding(net));
    const WalkSpectrumReport r = verify_walk_spectrum(hyb, joint_distribution(net), walk);
    EXPECT_LT(r.psi0_residual, 1e-10) << name;
    EXPECT_LT(r.u_swap_residual, 1e-10) << name;
    EXPECT_LT(r.singular_spectrum_mismatch, 1e-9) << name;
    EXPECT_LT(r.perp_invariance_residual, 1e-9) << name;
    EXPECT_EQ(r.busy_dimension, 2 * static_cast<Eigen::Index>(net.n_states()) - 1) << name;
  }
}

TEST(VerifyWalkSpectrum, GatedChecksOnNormalFixtures) {
  for (const std::string& name : testing::kNormalFixtures) {
    const BayesianNetwork net = fixture(name);
    const TransitionMatrix hyb = build_M_hyb(build_M1(net), build_M2(net));
    for (Completion completion : {Completion::GramSchmidt, Completion::Multiplexor}) {
      WalkOperator walk = completion == Completion::Multiplexor
                              ? WalkOperator(make_embedding(net))
                              : WalkOperator(build_U(build_U1(net), build_U2(net)), layout_for(net));
      const WalkSpectrumReport r = verify_walk_spectrum(hyb, joint_distribution(net), walk);
      EXPECT_TRUE(r.orthonormal_gate) << name;
      EXPECT_LT(r.spectrum_mismatch, 1e-9) << name;
      EXPECT_LT(r.eigenpair_residual, 1e-9) << name;
      EXPECT_LT(r.gram_residual, 1e-9) << name;
      EXPECT_LT(r.invariance_residual, 1e-9) << name;
      EXPECT_LT(r.sector_projection_residual, 1e-9) << name;
      EXPECT_LT(r.sector_projection_adjoint_residual, 1e-9) << name;
    }
  }
}

TEST(VerifyWalkSpectrum, GenericFixturesFailTheGate) {
  for (const std::string& name : testing::kGenericFixtures) {
    const BayesianNetwork net = fixture(name);
    WalkOperator walk(make_embedding(net));
    const WalkSpectrumReport r =
        verify_walk_spectrum(build_M_hyb(build_M1(net), build_M2(net)), joint_distribution(net), walk);
    EXPECT_FALSE(r.orthonormal_gate) << name;
    EXPECT_GT(r.orthonormality_residual, 1e-6) << name;
  }
}

// Non-trivial phases: W's busy spectrum is e^{±2iφ_j} with cos φ_j the kernel's
// eigenvalues.
TEST(VerifyWalkSpectrum, KernelLevelReversiblePair) {
  const RealMatrix m = reversible_kernel();
  WalkOperator walk = kernel_walk(m);
  const WalkSpectrumReport r =
      verify_walk_spectrum(TransitionMatrix{m, KernelKind::NonStochastic}, RealVector::Constant(4, 0.25), walk);
  EXPECT_TRUE(r.orthonormal_gate);
  EXPECT_LT(r.spectrum_mismatch, 1e-9);
  EXPECT_LT(r.eigenpair_residual, 1e-9);
  EXPECT_LT(r.gram_residual, 1e-9);
  EXPECT_LT(r.invariance_residual, 1e-9);
  EXPECT_LT(r.sector_projection_residual, 1e-9);
  EXPECT_LT(r.perp_invariance_residual, 1e-9);

  const SpectralData s = spectrum(m);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(walk.dense().cast<Complex>(), false);
  for (Eigen::Index j = 1; j < 4; ++j) {
    for (double sign : {1.0, -1.0}) {
      const Complex expected = std::polar(1.0, sign * 2.0 * s.phi(j));
      EXPECT_LT((solver.eigenvalues().array() - expected).abs().minCoeff(), 1e-9);
    }
  }
}

TEST(SwapRegisters, Involution) {
  const RegisterLayout layout{2};
  const ComplexVector psi = random_state(16, 8);
  EXPECT_EQ((swap_registers(swap_registers(psi, layout), layout) - psi).norm(), 0.0);
  EXPECT_EQ(swap_registers(basis_state(16, layout.index(1, 2)), layout)(static_cast<Eigen::Index>(layout.index(2, 1))),
            Complex(1.0));
}

}  // namespace
}  // namespace qgibbs
