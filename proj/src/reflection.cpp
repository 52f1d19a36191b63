#include "qgibbs/reflection.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/SVD>

namespace qgibbs {

void check_budget(const PEParams& params, const QubitBudget& budget) {
  const int needed = budget.walk_qubits + params.probe_qubits();
  if (needed > budget.max_qubits) {
    throw BudgetExceeded("needs " + std::to_string(needed) + " qubits (a = " + std::to_string(params.a) +
                         ", c = " + std::to_string(params.c) + "), budget is " + std::to_string(budget.max_qubits));
  }
}

PEParams choose_parameters(double delta, double epsilon2, const QubitBudget& budget) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  if (!(epsilon2 > 0.0 && epsilon2 < 1.0)) throw std::invalid_argument("epsilon2 must lie in (0, 1)");
  PEParams params;
  params.epsilon2 = epsilon2;
  const double phi = std::acos(1.0 - delta);
  params.resolution = phi / std::numbers::pi;
  // The 1e-12 slack keeps exact powers of two (Δ = 1/2, ε₂ = 1/16) from
  // rounding up.
  params.a = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / params.resolution) - 1e-12)));
  params.c = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / std::sqrt(epsilon2)) - 1e-12)));

  if (budget.walk_qubits + params.probe_qubits() <= budget.max_qubits) return params;
  if (!budget.allow_cap) check_budget(params, budget);
  while (params.c > 1 && budget.walk_qubits + params.probe_qubits() > budget.max_qubits) --params.c;
  while (params.a > 1 && budget.walk_qubits + params.probe_qubits() > budget.max_qubits) --params.a;
  params.cap_applied = true;
  check_budget(params, budget);
  return params;
}

ProbeLayout probe_layout(const RegisterLayout& walk, const PEParams& params) {
  return ProbeLayout{walk.n_qubits(), params.a, params.c};
}

namespace {

void require_dimension(const Eigen::Ref<ComplexVector>& state, const ProbeLayout& probes) {
  if (static_cast<StateIndex>(state.size()) != probes.dimension()) {
    throw DimensionMismatch("state has " + std::to_string(state.size()) + " amplitudes, probe layout needs " +
                            std::to_string(probes.dimension()));
  }
}

}  // namespace

void apply_V(Eigen::Ref<ComplexVector> state, WalkOperator& walk, const PEParams& params) {
  const ProbeLayout probes = probe_layout(walk.layout(), params);
  require_dimension(state, probes);
  const RealMatrix h = hadamard_transform(params.a);
  const ComplexMatrix inverse_fourier = fourier_transform(params.a).adjoint();
  for (int k = 0; k < params.c; ++k) {
    const int offset = probes.qubit(k, 0);
    apply_block<double>(state, offset, params.a, h);
    for (int t = 0; t < params.a; ++t) {
      const std::uint64_t control = std::uint64_t{1} << probes.qubit(k, t);
      for (std::uint64_t r = 0; r < (std::uint64_t{1} << t); ++r) walk.apply(state, control);
    }
    apply_block<Complex>(state, offset, params.a, inverse_fourier);
  }
}

void apply_V_inverse(Eigen::Ref<ComplexVector> state, WalkOperator& walk, const PEParams& params) {
  const ProbeLayout probes = probe_layout(walk.layout(), params);
  require_dimension(state, probes);
  const RealMatrix h = hadamard_transform(params.a);
  const ComplexMatrix fourier = fourier_transform(params.a);
  for (int k = params.c - 1; k >= 0; --k) {
    const int offset = probes.qubit(k, 0);
    apply_block<Complex>(state, offset, params.a, fourier);
    for (int t = params.a - 1; t >= 0; --t) {
      const std::uint64_t control = std::uint64_t{1} << probes.qubit(k, t);
      for (std::uint64_t r = 0; r < (std::uint64_t{1} << t); ++r) walk.apply_inverse(state, control);
    }
    apply_block<double>(state, offset, params.a, h);
  }
}

void apply_Q(Eigen::Ref<ComplexVector> state, const ProbeLayout& probes) {
  require_dimension(state, probes);
  flip_sign_where(state, probes.probe_mask(), 0);
}

void apply_R_tar_approx(Eigen::Ref<ComplexVector> state, WalkOperator& walk, const PEParams& params) {
  apply_V(state, walk, params);
  apply_Q(state, probe_layout(walk.layout(), params));
  apply_V_inverse(state, walk, params);
}

ComplexVector with_probes(const ComplexVector& walk_state, const ProbeLayout& probes) {
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(probes.dimension()));
  out.head(walk_state.size()) = walk_state;
  return out;
}

ReflectionError measure_reflection_error(WalkOperator& walk, const RealVector& pi, const SpectralData& hyb_spectral,
                                         const PEParams& params) {
  const RegisterLayout& layout = walk.layout();
  if (layout.nb > kMaxReflectionErrorBits) throw DimensionMismatch("reflection error needs nb <= 3");
  const ProbeLayout probes = probe_layout(layout, params);
  const ComplexVector psi0 = stationary_state(pi, layout);

  const auto error_for = [&](const ComplexVector& psi) {
    ComplexVector state = with_probes(psi, probes);
    apply_R_tar_approx(state, walk, params);
    const ComplexVector exact = psi - 2.0 * psi0 * psi0.dot(psi);
    state.head(exact.size()) -= exact;
    return state;
  };

  ReflectionError out;
  out.sqrt_epsilon2 = std::sqrt(params.epsilon2);

  const ComplexMatrix busy = busy_subspace(walk);
  ComplexMatrix errors(static_cast<Eigen::Index>(probes.dimension()), busy.cols());
  for (Eigen::Index k = 0; k < busy.cols(); ++k) errors.col(k) = error_for(busy.col(k));
  Eigen::JacobiSVD<ComplexMatrix> svd(errors);
  out.operator_error = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;

  try {
    const BusyBasis basis = busy_basis(hyb_spectral, pi, walk);
    const ComplexMatrix vectors = basis.matrix();
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
      out.basis_error = std::max(out.basis_error, error_for(vectors.col(k)).norm());
    }
  } catch (const DegeneratePhase&) {
    out.basis_error = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace qgibbs
