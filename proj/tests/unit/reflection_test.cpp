#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qgibbs/reflection.hpp"
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

PEParams params(int a, int c, double epsilon2 = 1.0 / 16.0) {
  PEParams p;
  p.a = a;
  p.c = c;
  p.epsilon2 = epsilon2;
  return p;
}

struct NetCase {
  BayesianNetwork net;
  RealVector pi;
  SpectralData hyb;
  WalkOperator walk;
};

NetCase net_case(const std::string& name) {
  BayesianNetwork net = fixture(name);
  RealVector pi = joint_distribution(net);
  SpectralData hyb = spectrum(build_M_hyb(build_M1(net), build_M2(net)));
  WalkOperator walk(make_embedding(net));
  return {std::move(net), std::move(pi), std::move(hyb), std::move(walk)};
}

TEST(ChooseParameters, Examples) {
  const PEParams rank_one = choose_parameters(1.0, 0.5);
  EXPECT_NEAR(rank_one.resolution, 0.5, 1e-15);
  EXPECT_EQ(rank_one.a, 1);
  EXPECT_EQ(choose_parameters(1.0, 1.0 / 16.0).c, 2);
  EXPECT_EQ(choose_parameters(1.0, 1.0 / 64.0).c, 3);
}

TEST(ChooseParameters, Contract) {
  for (double delta : {0.9, 0.3, 0.05, 0.02, 0.003}) {
    for (double epsilon2 : {0.2, 1.0 / 16.0, 0.01}) {
      const PEParams p = choose_parameters(delta, epsilon2, {.walk_qubits = 2, .max_qubits = 64});
      EXPECT_GE(std::ldexp(1.0, p.a), 1.0 / p.resolution - 1e-9);
      EXPECT_GE(p.c, std::log2(1.0 / std::sqrt(epsilon2)) - 1e-9);
      EXPECT_LT(std::ldexp(1.0, p.a - 1), 1.0 / p.resolution);
    }
  }
  EXPECT_THROW(choose_parameters(0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(choose_parameters(0.5, 1.0), std::invalid_argument);
}

TEST(ChooseParameters, Budget) {
  const QubitBudget tight{.walk_qubits = 16, .max_qubits = 24};
  EXPECT_THROW(choose_parameters(0.001, 1.0 / 16.0, tight), BudgetExceeded);
  QubitBudget capped = tight;
  capped.allow_cap = true;
  const PEParams p = choose_parameters(0.001, 1.0 / 16.0, capped);
  EXPECT_TRUE(p.cap_applied);
  EXPECT_LE(16 + p.probe_qubits(), 24);
  EXPECT_EQ(p.c, 1);
}

// Kernel with a single nontrivial eigenvalue 0.98 (δ = 0.02): the smallest a
// whose reflection error reaches √ε₂ at fixed c, found by sweeping.
TEST(ChooseParameters, SweepOracleAtDeltaTwoHundredths) {
  const RealMatrix m = 0.98 * RealMatrix::Identity(4, 4) + 0.02 * RealMatrix::Constant(4, 4, 0.25);
  const TransitionMatrix root = build_lambda(TransitionMatrix{m});
  WalkOperator walk(build_U(build_U1(root), build_U2(root)), RegisterLayout{2});
  const RealVector pi = RealVector::Constant(4, 0.25);
  const SpectralData s = spectrum(m);
  const double epsilon2 = 1.0 / 16.0;
  const PEParams chosen = choose_parameters(0.02, epsilon2);
  int minimal = -1;
  for (int a = 1; a <= 7 && minimal < 0; ++a) {
    if (measure_reflection_error(walk, pi, s, params(a, chosen.c, epsilon2)).operator_error <= std::sqrt(epsilon2)) {
      minimal = a;
    }
  }
  ASSERT_GT(minimal, 0);
  EXPECT_GE(chosen.a, minimal);
  EXPECT_LE(chosen.a, minimal + 1);
}

TEST(ProbeLayout, QubitPositions) {
  const ProbeLayout p = probe_layout(RegisterLayout{2}, params(3, 2));
  EXPECT_EQ(p.qubit(0, 0), 4);
  EXPECT_EQ(p.qubit(1, 2), 9);
  EXPECT_EQ(p.total_qubits(), 10);
  EXPECT_EQ(p.probe_mask(), bit_range(4, 6));
}

TEST(ApplyV, StationaryStateKeepsZeroProbes) {
  NetCase k = net_case("seeded3");
  const PEParams p = params(2, 2);
  const ProbeLayout probes = probe_layout(k.walk.layout(), p);
  const ComplexVector start = with_probes(stationary_state(k.pi, k.walk.layout()), probes);
  ComplexVector state = start;
  apply_V(state, k.walk, p);
  EXPECT_GE(std::norm(start.dot(state)), 1.0 - p.epsilon2);
  EXPECT_NEAR(std::norm(start.dot(state)), 1.0, 1e-12);
}

TEST(ApplyV, SingleNodePhasePiReadsOne) {
  NetCase k = net_case("single_node");
  const BusyBasis basis = busy_basis(k.hyb, k.pi, k.walk);
  const PEParams p = params(1, 1);
  const ProbeLayout probes = probe_layout(k.walk.layout(), p);
  for (const ComplexVector& psi : {basis.psi_plus[0], basis.psi_minus[0]}) {
    ComplexVector state = with_probes(psi, probes);
    apply_V(state, k.walk, p);
    const auto walk_dim = static_cast<Eigen::Index>(k.walk.layout().dimension());
    EXPECT_LT(state.head(walk_dim).norm(), 1e-14);
    EXPECT_NEAR(state.tail(walk_dim).norm(), 1.0, 1e-14);
  }
}

TEST(ApplyV, WalkCount) {
  NetCase k = net_case("two_node");
  for (int a = 1; a <= 3; ++a) {
    for (int c = 1; c <= 2; ++c) {
      const PEParams p = params(a, c);
      ComplexVector state = ComplexVector::Zero(static_cast<Eigen::Index>(probe_layout(k.walk.layout(), p).dimension()));
      state(0) = 1.0;
      k.walk.reset_counter();
      apply_V(state, k.walk, p);
      EXPECT_EQ(k.walk.applications(), p.walk_steps_per_V());
      EXPECT_EQ(p.walk_steps_per_V(), static_cast<std::uint64_t>(((1 << a) - 1) * c));
      EXPECT_EQ(p.nominal_walk_steps_per_V(), static_cast<std::uint64_t>((1 << a) * c));
      k.walk.reset_counter();
      apply_R_tar_approx(state, k.walk, p);
      EXPECT_EQ(k.walk.applications(), 2 * p.walk_steps_per_V());
    }
  }
}

TEST(ApplyV, InverseUndoes) {
  NetCase k = net_case("chain3");
  const PEParams p = params(2, 2);
  const ComplexVector psi = random_state(static_cast<Eigen::Index>(probe_layout(k.walk.layout(), p).dimension()), 5);
  ComplexVector state = psi;
  apply_V(state, k.walk, p);
  apply_V_inverse(state, k.walk, p);
  EXPECT_LT((state - psi).norm(), 1e-12);
}

TEST(ApplyQ, Examples) {
  const ProbeLayout probes = probe_layout(RegisterLayout{1}, params(1, 2));
  ComplexVector psi = random_state(static_cast<Eigen::Index>(probes.dimension()), 1);
  const ComplexVector before = psi;
  apply_Q(psi, probes);
  EXPECT_LT((psi.head(4) + before.head(4)).norm(), 1e-15);
  EXPECT_EQ((psi.tail(12) - before.tail(12)).norm(), 0.0);
  apply_Q(psi, probes);
  EXPECT_LT((psi - before).norm(), 1e-14);
}

TEST(RTarApprox, FlipsStationaryState) {
  for (const char* name : {"seeded3", "two_node", "single_node"}) {
    NetCase k = net_case(name);
    const PEParams p = params(2, 2);
    const ProbeLayout probes = probe_layout(k.walk.layout(), p);
    const ComplexVector start = with_probes(stationary_state(k.pi, k.walk.layout()), probes);
    ComplexVector state = start;
    apply_R_tar_approx(state, k.walk, p);
    EXPECT_LT((state + start).norm(), std::sqrt(p.epsilon2)) << name;
  }
}

TEST(RTarApprox, SingleNodePhaseVectorIsKept) {
  NetCase k = net_case("single_node");
  const BusyBasis basis = busy_basis(k.hyb, k.pi, k.walk);
  const PEParams p = params(1, 1);
  const ProbeLayout probes = probe_layout(k.walk.layout(), p);
  const ComplexVector start = with_probes(basis.psi_plus[0], probes);
  ComplexVector state = start;
  apply_R_tar_approx(state, k.walk, p);
  EXPECT_LT((state - start).norm(), 1e-14);
}

TEST(RTarApprox, UnitaryAndInvolutive) {
  NetCase k = net_case("collider");
  const PEParams p = params(2, 2);
  const ComplexVector psi = random_state(static_cast<Eigen::Index>(probe_layout(k.walk.layout(), p).dimension()), 6);
  ComplexVector state = psi;
  apply_R_tar_approx(state, k.walk, p);
  EXPECT_LT(std::abs(state.norm() - 1.0), 1e-10);
  apply_R_tar_approx(state, k.walk, p);
  EXPECT_LT((state - psi).norm(), 1e-10);
}

TEST(ReflectionError, ExactPhaseNetsAreExact) {
  for (const char* name : {"single_node", "single_uniform", "independent2", "independent3_uniform", "reversible2"}) {
    NetCase k = net_case(name);
    const ReflectionError e = measure_reflection_error(k.walk, k.pi, k.hyb, params(1, 1));
    EXPECT_LT(e.operator_error, 1e-9) << name;
    EXPECT_LT(e.basis_error, 1e-9) << name;
  }
}

TEST(ReflectionError, DecreasesWithBlocks) {
  for (const char* name : {"seeded3", "chain3", "two_node"}) {
    NetCase k = net_case(name);
    const RealVector sigma = hybrid_singular_values(build_M_hyb(build_M1(k.net), build_M2(k.net)));
    const int a = choose_parameters(1.0 - sigma(1), 1.0 / 16.0).a;
    double previous = 2.0;
    for (int c = 1; c <= 3; ++c) {
      const double error = measure_reflection_error(k.walk, k.pi, k.hyb, params(a, c)).operator_error;
      EXPECT_LT(error, previous) << name << " c=" << c;
      previous = error;
    }
  }
}

TEST(ReflectionError, WithinFourRootEpsilonOnFixtures) {
  for (const std::string& name : testing::all_fixtures()) {
    NetCase k = net_case(name);
    if (k.net.n_bits() > kMaxReflectionErrorBits) continue;
    const RealVector sigma = hybrid_singular_values(build_M_hyb(build_M1(k.net), build_M2(k.net)));
    const PEParams p = choose_parameters(sigma.size() > 1 ? 1.0 - sigma(1) : 1.0, 1.0 / 16.0);
    const ReflectionError e = measure_reflection_error(k.walk, k.pi, k.hyb, p);
    EXPECT_LT(e.operator_error, 4.0 * e.sqrt_epsilon2) << name;
  }
}

TEST(ReflectionError, RejectsLargeNets) {
  NetCase k = net_case("star_g060");
  EXPECT_THROW(measure_reflection_error(k.walk, k.pi, k.hyb, params(1, 1)), DimensionMismatch);
}

}  // namespace
}  // namespace qgibbs
