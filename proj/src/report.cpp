#include "qgibbs/report.hpp"

#include <cmath>

namespace qgibbs {

using nlohmann::json;

namespace {

// NaN diagnostics become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const ComplexVector& values) {
  json out = json::array();
  for (Eigen::Index k = 0; k < values.size(); ++k) out.push_back({values(k).real(), values(k).imag()});
  return out;
}

json to_json(const RealVector& values) {
  json out = json::array();
  for (Eigen::Index k = 0; k < values.size(); ++k) out.push_back(number(values(k)));
  return out;
}

json to_json(const SpectralData& s) {
  RealVector moduli = s.eigenvalues.cwiseAbs();
  return {{"eigenvalues", to_json(s.eigenvalues)},
          {"moduli", to_json(moduli)},
          {"phi", to_json(s.phi)},
          {"eta", to_json(s.eta)},
          {"delta", s.gap},
          {"core_dimension", s.core_dimension},
          {"self_adjoint", s.self_adjoint},
          {"residuals",
           {{"orthonormality", s.orthonormality_residual},
            {"normality", s.normality_residual},
            {"reconstruction", s.reconstruction_residual},
            {"eigenpair", s.eigenpair_residual}}}};
}

json to_json(const PEParams& p) {
  return {{"a", p.a},
          {"c", p.c},
          {"epsilon2", p.epsilon2},
          {"resolution", p.resolution},
          {"cap_applied", p.cap_applied},
          {"walk_steps_per_V", p.walk_steps_per_V()},
          {"nominal_walk_steps_per_V", p.nominal_walk_steps_per_V()}};
}

json to_json(const WalkSpectrumReport& r) {
  return {{"psi0_residual", r.psi0_residual},
          {"u_swap_residual", r.u_swap_residual},
          {"sector_projection_residual", r.sector_projection_residual},
          {"sector_projection_adjoint_residual", r.sector_projection_adjoint_residual},
          {"eigenpair_residual", number(r.eigenpair_residual)},
          {"gram_residual", number(r.gram_residual)},
          {"invariance_residual", r.invariance_residual},
          {"spectrum_mismatch", r.spectrum_mismatch},
          {"singular_spectrum_mismatch", r.singular_spectrum_mismatch},
          {"perp_invariance_residual", r.perp_invariance_residual},
          {"busy_dimension", r.busy_dimension},
          {"orthonormal_gate", r.orthonormal_gate},
          {"busy_basis_available", r.busy_basis_available},
          {"orthonormality_residual", r.orthonormality_residual},
          {"normality_residual", r.normality_residual}};
}

json to_json(const ReflectionError& e) {
  return {{"operator_error", e.operator_error},
          {"basis_error", number(e.basis_error)},
          {"sqrt_epsilon2", e.sqrt_epsilon2}};
}

json to_json(const EigenbasisOverlapReport& r) {
  json out = {{"stationary_residual", r.stationary_residual}, {"skipped", r.skipped}};
  if (r.skipped) {
    out["skip_reason"] = r.skip_reason;
  } else {
    out["residual"] = r.residual;
  }
  return out;
}

json to_json(const SamplingReport& r) {
  json out = {{"method", r.method},
              {"shots", r.shots},
              {"seed", r.seed},
              {"x0", r.x0},
              {"p0", r.p0},
              {"counts", r.counts},
              {"empirical", to_json(r.empirical)},
              {"pi", to_json(r.pi)},
              {"tv_empirical", r.tv_empirical},
              {"eps_hat_empirical", r.eps_hat_empirical}};
  if (r.exact.size()) {
    out["exact"] = to_json(r.exact);
    out["tv_exact"] = r.tv_exact;
    out["eps_hat"] = r.eps_hat;
  }
  if (r.method == "quantum") {
    out["L"] = r.L;
    out["pe"] = to_json(r.pe);
    out["large_p0_fallback"] = r.large_p0_fallback;
    out["success_check"] = r.success_check;
    out["fidelity"] = r.fidelity;
    out["success_probability"] = r.success_probability;
    out["raw"] = to_json(r.raw);
    out["eps_hat_raw"] = r.eps_hat_raw;
    out["tv_raw"] = r.tv_raw;
    out["attempts"] = r.attempts;
    out["W_applications_per_preparation"] = r.walk_steps_per_preparation;
    out["W_applications_per_check"] = r.walk_steps_per_check;
    out["W_applications_total"] = r.walk_steps_total;
    out["W_applications_nominal_per_preparation"] =
        static_cast<std::uint64_t>(r.L) * 2 * r.pe.nominal_walk_steps_per_V();
  } else {
    out["burn_in"] = r.burn_in;
    out["classical_sweeps"] = r.classical_sweeps;
  }
  if (r.wall_clock_seconds) out["wall_clock_seconds"] = *r.wall_clock_seconds;
  return out;
}

json to_json(const CompareRow& row) {
  return {{"net", row.net},
          {"delta", row.delta},
          {"delta_walk", row.delta_walk},
          {"eps_target", row.eps_target},
          {"a", row.a},
          {"c", row.c},
          {"L", row.L},
          {"W_applications", row.walk_steps},
          {"W_applications_nominal", row.nominal_walk_steps},
          {"classical_sweeps", row.classical_sweeps},
          {"tv_quantum", row.tv_quantum},
          {"tv_classical", row.tv_classical}};
}

}  // namespace qgibbs
