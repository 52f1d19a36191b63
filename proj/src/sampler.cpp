#include "qgibbs/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace qgibbs {

namespace {

constexpr std::uint64_t kMaxMixingSweeps = std::uint64_t{1} << 40;

std::string format_number(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", v);
  return buffer;
}

void fill_counts(SamplingReport& report, const std::vector<std::uint64_t>& outcomes, Eigen::Index n_states) {
  report.counts.assign(static_cast<std::size_t>(n_states), 0);
  for (std::uint64_t o : outcomes) ++report.counts[o];
  report.empirical = RealVector::Zero(n_states);
  for (Eigen::Index s = 0; s < n_states; ++s) {
    report.empirical(s) = static_cast<double>(report.counts[static_cast<std::size_t>(s)]) /
                          static_cast<double>(std::max<std::uint64_t>(1, report.shots));
  }
  report.tv_empirical = tv_distance(report.empirical, report.pi);
  report.eps_hat_empirical = sqrt_distance(report.pi, report.empirical);
}

StateIndex checked_support_point(const BayesianNetwork& net, const Assignment& x0, const RealVector& pi) {
  if (!is_valid(net, x0)) throw std::invalid_argument("x0 is not a valid assignment for this network");
  const StateIndex index = pack(net, x0);
  if (!(pi(static_cast<Eigen::Index>(index)) > 0.0)) throw std::invalid_argument("x0 has zero probability");
  return index;
}

}  // namespace

int grover_iterations(double p0) {
  if (!(p0 > 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must lie in (0, 1]");
  const double theta = std::asin(std::sqrt(p0));
  return std::max(1, static_cast<int>(std::lround(std::numbers::pi / (4.0 * theta) - 0.5)));
}

void apply_R_beg(Eigen::Ref<ComplexVector> state, const RegisterLayout& layout, StateIndex x0) {
  if (static_cast<StateIndex>(state.size()) < layout.dimension()) throw DimensionMismatch("state too small");
  state(static_cast<Eigen::Index>(layout.index(0, x0))) *= -1.0;
}

Rng shot_rng(std::uint64_t seed, std::uint64_t shot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shot), static_cast<std::uint32_t>(shot >> 32)};
  return Rng(seq);
}

SamplingReport run_quantum_sampler(const BayesianNetwork& net, const GroverConfig& cfg) {
  if (cfg.shots < 1) throw std::invalid_argument("shots must be >= 1");
  SamplingReport report;
  report.method = "quantum";
  report.shots = cfg.shots;
  report.seed = cfg.seed;
  report.x0 = cfg.x0;
  report.pi = joint_distribution(net);
  const StateIndex x0 = checked_support_point(net, cfg.x0, report.pi);
  report.p0 = report.pi(static_cast<Eigen::Index>(x0));
  report.L = cfg.L > 0 ? cfg.L : grover_iterations(report.p0);
  report.large_p0_fallback = report.p0 > 0.25;
  report.pe = cfg.pe;
  report.success_check = cfg.success_check;

  const RegisterLayout layout = layout_for(net);
  QubitBudget budget = cfg.budget;
  budget.walk_qubits = layout.n_qubits();
  check_budget(cfg.pe, budget);
  const ProbeLayout probes = probe_layout(layout, cfg.pe);
  WalkOperator walk(make_embedding(net));

  ComplexVector state = ComplexVector::Zero(static_cast<Eigen::Index>(probes.dimension()));
  state(static_cast<Eigen::Index>(layout.index(0, x0))) = 1.0;
  for (int l = 0; l < report.L; ++l) {
    apply_R_tar_approx(state, walk, cfg.pe);
    apply_R_beg(state, layout, x0);
  }
  report.walk_steps_per_preparation = walk.applications();

  const ComplexVector target = with_probes(stationary_state(report.pi, layout), probes);
  report.fidelity = std::norm(target.dot(state));
  report.raw = register_marginal(state, layout.r2_offset(), layout.nb);
  report.eps_hat_raw = sqrt_distance(report.pi, report.raw);
  report.tv_raw = tv_distance(report.raw, report.pi);

  if (cfg.success_check) {
    walk.reset_counter();
    apply_V(state, walk, cfg.pe);
    report.walk_steps_per_check = walk.applications();
    // Probe qubits are the high bits: the all-zero probe component is the head.
    const ComplexVector kept = state.head(static_cast<Eigen::Index>(layout.dimension()));
    report.success_probability = kept.squaredNorm();
    if (!(report.success_probability > 1e-12)) throw Error("success check never passes");
    report.exact = register_marginal(kept, layout.r2_offset(), layout.nb) / report.success_probability;
  } else {
    report.exact = report.raw;
  }
  report.eps_hat = sqrt_distance(report.pi, report.exact);
  report.tv_exact = tv_distance(report.exact, report.pi);

  std::vector<std::uint64_t> outcomes(cfg.shots);
  for (std::uint64_t shot = 0; shot < cfg.shots; ++shot) {
    Rng rng = shot_rng(cfg.seed, shot);
    if (cfg.success_check) {
      do {
        ++report.attempts;
      } while (uniform01(rng) >= report.success_probability);
    } else {
      ++report.attempts;
    }
    outcomes[shot] = static_cast<std::uint64_t>(sample_index(report.exact, rng));
  }
  fill_counts(report, outcomes, report.pi.size());
  report.walk_steps_total =
      report.attempts * (report.walk_steps_per_preparation + report.walk_steps_per_check);
  return report;
}

SamplingReport run_classical_sampler(const BayesianNetwork& net, int burn_in, std::uint64_t shots, std::uint64_t seed,
                                     const Assignment& x0) {
  if (burn_in < 0) throw std::invalid_argument("burn-in must be >= 0");
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  SamplingReport report;
  report.method = "classical";
  report.shots = shots;
  report.seed = seed;
  report.x0 = x0;
  report.burn_in = burn_in;
  report.pi = joint_distribution(net);
  const StateIndex start = checked_support_point(net, x0, report.pi);
  report.p0 = report.pi(static_cast<Eigen::Index>(start));

  std::vector<std::uint64_t> outcomes(shots);
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    Rng rng = shot_rng(seed, shot);
    Assignment x = x0;
    for (int k = 0; k < burn_in; ++k) x = classical_gibbs_step(net, x, rng);
    outcomes[shot] = pack(net, x);
  }
  report.classical_sweeps = shots * static_cast<std::uint64_t>(burn_in);
  fill_counts(report, outcomes, report.pi.size());
  if (net.n_bits() <= kMaxKernelBits) {
    report.exact = evolve_distribution(build_M1(net), start, static_cast<std::uint64_t>(burn_in));
    report.tv_exact = tv_distance(report.exact, report.pi);
    report.eps_hat = sqrt_distance(report.pi, report.exact);
  }
  return report;
}

RealVector evolve_distribution(const TransitionMatrix& m1, StateIndex x0, std::uint64_t k) {
  RealVector p = RealVector::Unit(m1.size(), static_cast<Eigen::Index>(x0));
  RealMatrix power = m1.entries;
  while (k > 0) {
    if (k & 1u) p = power * p;
    k >>= 1;
    if (k > 0) power = power * power;
  }
  return p;
}

std::uint64_t classical_mixing_sweeps(const TransitionMatrix& m1, const RealVector& pi, StateIndex x0,
                                      double eps_target) {
  const auto mixed = [&](std::uint64_t k) { return tv_distance(evolve_distribution(m1, x0, k), pi) <= eps_target; };
  if (mixed(0)) return 0;
  std::uint64_t hi = 1;
  while (!mixed(hi)) {
    if (hi >= kMaxMixingSweeps) throw Error("chain does not reach the target precision");
    hi *= 2;
  }
  std::uint64_t lo = hi / 2;  // not mixed (or 0)
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (mixed(mid) ? hi : lo) = mid;
  }
  return hi;
}

CompareRow compare(const BayesianNetwork& net, const std::string& name, const CompareOptions& options) {
  if (!(options.eps_target > 0.0 && options.eps_target < 1.0)) throw std::invalid_argument("eps_target must lie in (0, 1)");
  CompareRow row;
  row.net = name;
  row.eps_target = options.eps_target;

  const RealVector pi = joint_distribution(net);
  const TransitionMatrix m1 = build_M1(net);
  const TransitionMatrix m2 = build_M2(net);
  row.delta = spectrum(m1).gap;
  const RealVector sigma = hybrid_singular_values(build_M_hyb(m1, m2));
  row.delta_walk = 1.0 - (sigma.size() > 1 ? sigma(1) : 0.0);
  if (!(row.delta_walk > 1e-12)) throw DegenerateTopEigenvalue("walk has no phase gap");

  const Assignment x0 = find_support_point(net);
  const StateIndex start = pack(net, x0);
  row.L = grover_iterations(pi(static_cast<Eigen::Index>(start)));
  const double root_eps2 = options.eps_target / row.L;
  QubitBudget budget = options.budget;
  budget.walk_qubits = layout_for(net).n_qubits();
  const PEParams pe = choose_parameters(row.delta_walk, root_eps2 * root_eps2, budget);
  row.a = pe.a;
  row.c = pe.c;

  GroverConfig cfg;
  cfg.x0 = x0;
  cfg.L = row.L;
  cfg.pe = pe;
  cfg.shots = options.shots;
  cfg.seed = options.seed;
  cfg.budget = budget;
  const SamplingReport quantum = run_quantum_sampler(net, cfg);
  row.walk_steps = quantum.walk_steps_per_preparation;
  row.nominal_walk_steps = static_cast<std::uint64_t>(row.L) * 2 * pe.nominal_walk_steps_per_V();
  row.tv_quantum = quantum.tv_empirical;

  row.classical_sweeps = classical_mixing_sweeps(m1, pi, start, options.eps_target);
  const SamplingReport classical =
      run_classical_sampler(net, static_cast<int>(row.classical_sweeps), options.shots, options.seed, x0);
  row.tv_classical = classical.tv_empirical;
  return row;
}

std::string to_csv_row(const CompareRow& row) {
  return row.net + "," + format_number(row.delta) + "," + format_number(row.eps_target) + "," + std::to_string(row.a) +
         "," + std::to_string(row.c) + "," + std::to_string(row.L) + "," + std::to_string(row.walk_steps) + "," +
         std::to_string(row.classical_sweeps) + "," + format_number(row.tv_quantum) + "," +
         format_number(row.tv_classical);
}

}  // namespace qgibbs
