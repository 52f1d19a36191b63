#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgibbs/reflection.hpp"

namespace qgibbs {

/// ½ Σ |p − q|.
template <typename DerivedP, typename DerivedQ>
double tv_distance(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  if (p.size() != q.size()) throw LengthMismatch("distributions differ in length");
  return 0.5 * (p - q).cwiseAbs().sum();
}

/// max_x |√p(x) − √q(x)|.
template <typename DerivedP, typename DerivedQ>
double sqrt_distance(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  if (p.size() != q.size()) throw LengthMismatch("distributions differ in length");
  return (p.cwiseMax(0.0).cwiseSqrt() - q.cwiseMax(0.0).cwiseSqrt()).cwiseAbs().maxCoeff();
}

/// θ = arcsin √p0, L = max(1, round(π/(4θ) − 1/2)).
int grover_iterations(double p0);

/// Negates |0⟩_R1 |x0⟩_R2 with every probe qubit zero.
void apply_R_beg(Eigen::Ref<ComplexVector> state, const RegisterLayout& layout, StateIndex x0);

/// Independent generator for one shot, split deterministically from the seed.
Rng shot_rng(std::uint64_t seed, std::uint64_t shot);

struct GroverConfig {
  Assignment x0;
  /// 0 picks grover_iterations(π(x0)).
  int L = 0;
  PEParams pe;
  std::uint64_t shots = 1000;
  std::uint64_t seed = 1;
  /// Run V after the loop and keep outcomes whose probes read all zero.
  bool success_check = true;
  QubitBudget budget;
};

struct SamplingReport {
  std::string method;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  Assignment x0;
  double p0 = 0.0;
  std::vector<std::uint64_t> counts;
  RealVector empirical;
  /// Shot-free output distribution (post-selected when the check is on).
  RealVector exact;
  RealVector pi;
  double tv_empirical = 0.0;
  double tv_exact = 0.0;
  /// max_x |√π(x) − √π̃(x)| on `exact`.
  double eps_hat = 0.0;
  double eps_hat_empirical = 0.0;

  // Quantum only.
  int L = 0;
  PEParams pe;
  bool large_p0_fallback = false;
  bool success_check = false;
  /// |⟨ψ0 ⊗ 0^{ac}|final⟩|² before measurement.
  double fidelity = 0.0;
  double success_probability = 1.0;
  /// R2 distribution without the success check.
  RealVector raw;
  double eps_hat_raw = 0.0;
  double tv_raw = 0.0;
  std::uint64_t attempts = 0;
  /// W applications of one Grover loop, read from the walk counter.
  std::uint64_t walk_steps_per_preparation = 0;
  /// W applications of one success check.
  std::uint64_t walk_steps_per_check = 0;
  std::uint64_t walk_steps_total = 0;

  // Classical only.
  int burn_in = 0;
  std::uint64_t classical_sweeps = 0;

  std::optional<double> wall_clock_seconds;
};

/// Per shot: prepare |0⟩|x0⟩|0^{ac}⟩, apply (R_beg R̃_tar)^L, measure R2. The
/// pre-measurement state does not depend on the shot, so it is prepared once
/// and measured by exact marginals plus per-shot sampling.
SamplingReport run_quantum_sampler(const BayesianNetwork& net, const GroverConfig& cfg);

/// Each shot starts at x0 and runs `burn_in` sweeps.
SamplingReport run_classical_sampler(const BayesianNetwork& net, int burn_in, std::uint64_t shots, std::uint64_t seed,
                                     const Assignment& x0);

/// M1^k δ_x0.
RealVector evolve_distribution(const TransitionMatrix& m1, StateIndex x0, std::uint64_t k);

/// Least k with tv(M1^k δ_x0, π) ≤ eps_target (tv is non-increasing in k).
std::uint64_t classical_mixing_sweeps(const TransitionMatrix& m1, const RealVector& pi, StateIndex x0,
                                      double eps_target);

struct CompareRow {
  std::string net;
  double delta = 0.0;
  double delta_walk = 0.0;
  double eps_target = 0.0;
  int a = 0;
  int c = 0;
  int L = 0;
  std::uint64_t walk_steps = 0;
  std::uint64_t nominal_walk_steps = 0;
  std::uint64_t classical_sweeps = 0;
  double tv_quantum = 0.0;
  double tv_classical = 0.0;
};

struct CompareOptions {
  double eps_target = 0.25;
  std::uint64_t shots = 1000;
  std::uint64_t seed = 1;
  QubitBudget budget;
};

/// Parameters from the target precision (ε₂ = (ε/L)²), both samplers run,
/// classical cost from exact mixing.
CompareRow compare(const BayesianNetwork& net, const std::string& name, const CompareOptions& options);

inline constexpr const char* kCompareHeader =
    "net,delta,eps_target,a,c,L,W_applications,classical_sweeps,tv_quantum,tv_classical";
std::string to_csv_row(const CompareRow& row);

}  // namespace qgibbs
