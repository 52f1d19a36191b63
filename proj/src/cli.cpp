#include "qgibbs/cli.hpp"

#include <glob.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgibbs/network_io.hpp"
#include "qgibbs/report.hpp"

namespace qgibbs {

using nlohmann::json;

namespace {

struct CommonOptions {
  std::string net_path;
  std::string format = "json";
  std::string out_path;
};

struct PeOverrides {
  std::optional<double> epsilon2;
  std::optional<int> probe_bits;
  std::optional<int> pe_steps;
  bool allow_cap = false;
};

struct SampleOptions {
  std::string method = "quantum";
  std::uint64_t seed = 1;
  std::uint64_t shots = 1000;
  std::optional<int> grover_iters;
  std::string x0;
  int burn_in = 10;
  bool no_success_check = false;
  bool timing = false;
};

struct CompareCliOptions {
  std::vector<std::string> paths;
  double eps_target = 0.25;
  std::uint64_t seed = 1;
  std::uint64_t shots = 1000;
};

std::string format_number(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

void emit(const std::string& text, const CommonOptions& common, std::ostream& out) {
  if (common.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(common.out_path);
  if (!file) throw std::invalid_argument("cannot write --out file '" + common.out_path + "'");
  file << text;
}

json envelope(const std::string& command, const std::string& net_path) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"net", net_path}};
}

Assignment parse_assignment(const std::string& text, const BayesianNetwork& net) {
  Assignment x;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      x.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("--x0", "expected comma-separated integers, got '" + text + "'");
    }
  }
  if (!is_valid(net, x)) throw ParseError("--x0", "not a valid assignment for this network");
  return x;
}

PEParams resolve_parameters(const BayesianNetwork& net, const PeOverrides& o, double default_epsilon2) {
  QubitBudget budget;
  budget.walk_qubits = layout_for(net).n_qubits();
  budget.allow_cap = o.allow_cap;
  const TransitionMatrix m1 = build_M1(net), m2 = build_M2(net);
  const RealVector sigma = hybrid_singular_values(build_M_hyb(m1, m2));
  const double delta_walk = 1.0 - (sigma.size() > 1 ? sigma(1) : 0.0);
  if (!(delta_walk > 1e-12)) throw DegenerateTopEigenvalue("walk has no phase gap");
  const double epsilon2 = o.epsilon2.value_or(default_epsilon2);
  // Parameter choice first without the cap so explicit overrides can bring
  // the count back under budget.
  QubitBudget loose = budget;
  loose.max_qubits = 1 << 20;
  PEParams params = choose_parameters(delta_walk, epsilon2, loose);
  if (o.probe_bits) {
    if (*o.probe_bits < 1) throw std::invalid_argument("--probe-bits must be >= 1");
    params.a = *o.probe_bits;
  }
  if (o.pe_steps) {
    if (*o.pe_steps < 1) throw std::invalid_argument("--pe-steps must be >= 1");
    params.c = *o.pe_steps;
  }
  if (budget.walk_qubits + params.probe_qubits() > budget.max_qubits) {
    if (!budget.allow_cap) check_budget(params, budget);
    while (params.c > 1 && budget.walk_qubits + params.probe_qubits() > budget.max_qubits) --params.c;
    while (params.a > 1 && budget.walk_qubits + params.probe_qubits() > budget.max_qubits) --params.a;
    params.cap_applied = true;
    check_budget(params, budget);
  }
  return params;
}

// ---- spectrum ----

int cmd_spectrum(const CommonOptions& common, const std::string& matrix, std::ostream& out) {
  const BayesianNetwork net = load_network(common.net_path);
  const TransitionMatrix m1 = build_M1(net), m2 = build_M2(net);
  const TransitionMatrix hyb = build_M_hyb(m1, m2);

  if (!matrix.empty()) {
    std::ostringstream csv;
    if (matrix == "m1") write_csv(csv, m1);
    else if (matrix == "m2") write_csv(csv, m2);
    else if (matrix == "lambda1") write_csv(csv, build_lambda(m1));
    else if (matrix == "lambda2") write_csv(csv, build_lambda(m2));
    else write_csv(csv, hyb);
    emit(csv.str(), common, out);
    return kExitOk;
  }

  const SpectralData s = spectrum(m1);
  const RealVector sigma = hybrid_singular_values(hyb);
  if (common.format == "csv") {
    std::ostringstream csv;
    csv << "j,re,im,modulus,phi,eta\n";
    for (Eigen::Index j = 0; j < s.eigenvalues.size(); ++j) {
      csv << j << ',' << format_number(s.eigenvalues(j).real()) << ',' << format_number(s.eigenvalues(j).imag())
          << ',' << format_number(std::abs(s.eigenvalues(j))) << ',' << format_number(s.phi(j)) << ','
          << format_number(s.eta(j)) << '\n';
    }
    emit(csv.str(), common, out);
    return kExitOk;
  }
  const RealVector pi = joint_distribution(net);
  json report = envelope("spectrum", common.net_path);
  report["n_states"] = net.n_states();
  report["n_bits"] = net.n_bits();
  report["delta"] = s.gap;
  report["delta_walk"] = 1.0 - (sigma.size() > 1 ? sigma(1) : 0.0);
  report["spectrum"] = to_json(s);
  report["hybrid_singular_values"] = to_json(sigma);
  report["detailed_balance_residual"] = check_pair_detailed_balance(m1, m2, pi);
  emit(report.dump(2) + "\n", common, out);
  return kExitOk;
}

// ---- verify ----

struct Ladder {
  json checks = json::array();
  bool failed = false;

  void hard(const std::string& name, double value, double tolerance) {
    const bool ok = std::isfinite(value) && value < tolerance;
    failed = failed || !ok;
    checks.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"status", ok ? "pass" : "fail"}});
  }
  /// Asserted only when `gate` holds; otherwise reported.
  void gated(const std::string& name, double value, double tolerance, bool gate) {
    if (gate) {
      hard(name, value, tolerance);
    } else {
      checks.push_back({{"name", name},
                        {"value", std::isfinite(value) ? json(value) : json(nullptr)},
                        {"tolerance", tolerance},
                        {"status", "reported"},
                        {"reason", "non-normal M_hyb"}});
    }
  }
  void skipped(const std::string& name, const std::string& reason) {
    checks.push_back({{"name", name}, {"status", "skipped"}, {"reason", reason}});
  }
  void failure(const std::string& name, const std::string& reason) {
    failed = true;
    checks.push_back({{"name", name}, {"status", "fail"}, {"reason", reason}});
  }
};

int cmd_verify(const CommonOptions& common, const PeOverrides& pe_overrides, std::uint64_t seed, std::ostream& out) {
  const BayesianNetwork net = load_network(common.net_path);
  json report = envelope("verify", common.net_path);
  report["n_bits"] = net.n_bits();
  Ladder ladder;

  const RealVector pi = joint_distribution(net);
  const TransitionMatrix m1 = build_M1(net), m2 = build_M2(net);
  const TransitionMatrix hyb = build_M_hyb(m1, m2);
  const RealVector root = pi.cwiseSqrt();

  ladder.hard("detailed_balance", check_pair_detailed_balance(m1, m2, pi), 1e-12);
  ladder.hard("stationarity_M1", stationarity_residual(m1, pi), 1e-12);
  ladder.hard("stationarity_M2", stationarity_residual(m2, pi), 1e-12);
  ladder.hard("stationarity_M_hyb_sqrt_pi", max_abs(hyb.entries * root - root), 1e-10);

  std::optional<SpectralData> hyb_spectral;
  try {
    const SpectralData s1 = spectrum(m1);
    hyb_spectral = spectrum(hyb);
    report["delta"] = s1.gap;
    report["spectrum_M1"] = to_json(s1);
    report["spectrum_M_hyb"] = to_json(*hyb_spectral);
    if ((pi.array() > 0.0).all()) {
      const SpectraComparison cmp = verify_spectra_equal(m1, m2, hyb, pi);
      ladder.hard("spectra_equal", cmp.eigenvalue_mismatch, 1e-9);
      ladder.hard("similarity_M2", cmp.m2_similarity_residual, 1e-12);
      ladder.hard("similarity_M_hyb", cmp.hyb_similarity_residual, 1e-12);
    } else {
      ladder.skipped("spectra_equal", "pi has zero entries");
    }
  } catch (const Error& e) {
    ladder.failure("spectrum", e.what());
  }
  const RealVector sigma = hybrid_singular_values(hyb);
  const double delta_walk = 1.0 - (sigma.size() > 1 ? sigma(1) : 0.0);
  report["delta_walk"] = delta_walk;
  report["hybrid_singular_values"] = to_json(sigma);

  const bool orthonormal = hyb_spectral && hyb_spectral->orthonormality_residual < 1e-6;
  report["orthonormal_gate"] = orthonormal;

  if (net.n_bits() <= kMaxWalkSpectrumBits) {
    const TransitionMatrix lambda1 = build_lambda(m1), lambda2 = build_lambda(m2);
    const Embedding embedding = make_embedding(net);
    for (Completion completion : {Completion::GramSchmidt, Completion::Multiplexor}) {
      const std::string tag = completion == Completion::GramSchmidt ? "gram_schmidt" : "multiplexor";
      const RealMatrix u1 = completion == Completion::GramSchmidt ? build_U1(lambda1) : dense_matrix(embedding.u1);
      const RealMatrix u2 = completion == Completion::GramSchmidt ? build_U2(lambda2) : dense_matrix(embedding.u2);
      const double tol = completion == Completion::GramSchmidt ? 1e-12 : 1e-10;
      ladder.hard("U1_defined_columns_" + tag, defined_column_residual_U1(u1, lambda1), tol);
      ladder.hard("U2_defined_columns_" + tag, defined_column_residual_U2(u2, lambda2), tol);
      ladder.hard("U1_unitarity_" + tag, unitarity_residual(u1), 1e-10);
      ladder.hard("U2_unitarity_" + tag, unitarity_residual(u2), 1e-10);
      const RealMatrix u = build_U(u1, u2);
      ladder.hard("U_hybrid_block_" + tag, max_abs(hybrid_block(u) - hyb.entries), 1e-10);
      if (hyb_spectral) {
        const EigenbasisOverlapReport overlap = verify_eigenbasis_overlap(u, *hyb_spectral, pi);
        ladder.hard("stationary_overlap_" + tag, overlap.stationary_residual, 1e-10);
        ladder.gated("eigenbasis_overlap_" + tag, overlap.residual, 1e-9, !overlap.skipped);
      }
    }
    report["gate_rotation_only"] = all_rotation_gates(embedding.u1) && all_rotation_gates(embedding.u2);

    WalkOperator walk(embedding);
    try {
      const WalkSpectrumReport w = verify_walk_spectrum(hyb, pi, walk, seed);
      report["walk"] = to_json(w);
      ladder.hard("walk_psi0_fixed", w.psi0_residual, 1e-10);
      ladder.hard("walk_u_swap_psi0", w.u_swap_residual, 1e-10);
      ladder.hard("walk_spectrum_singular", w.singular_spectrum_mismatch, 1e-9);
      ladder.hard("walk_perp_invariance", w.perp_invariance_residual, 1e-9);
      ladder.gated("walk_spectrum_eigen", w.spectrum_mismatch, 1e-9, orthonormal);
      ladder.gated("walk_eigenpairs", w.busy_basis_available ? w.eigenpair_residual : NAN, 1e-9, orthonormal);
      ladder.gated("walk_busy_gram", w.busy_basis_available ? w.gram_residual : NAN, 1e-9, orthonormal);
      ladder.gated("walk_invariance", w.invariance_residual, 1e-9, orthonormal);
      ladder.gated("walk_sector_projection", w.sector_projection_residual, 1e-9, orthonormal);
      ladder.gated("walk_sector_projection_adjoint", w.sector_projection_adjoint_residual, 1e-9, orthonormal);

      if (net.n_bits() <= kMaxReflectionErrorBits && hyb_spectral) {
        const PEParams params = resolve_parameters(net, pe_overrides, 1.0 / 16.0);
        const ReflectionError err = measure_reflection_error(walk, pi, *hyb_spectral, params);
        report["pe"] = to_json(params);
        report["reflection"] = to_json(err);
        ladder.hard("reflection_error", err.operator_error, 4.0 * err.sqrt_epsilon2);
      } else {
        ladder.skipped("reflection_error", "needs nb <= 3");
      }
    } catch (const BudgetExceeded&) {
      throw;
    } catch (const DimensionMismatch&) {
      throw;
    } catch (const Error& e) {
      ladder.failure("walk", e.what());
    }
  } else {
    ladder.skipped("embedding", "dense checks need nb <= 4");
  }

  report["checks"] = ladder.checks;
  report["passed"] = !ladder.failed;
  if (common.format == "csv") {
    std::ostringstream csv;
    csv << "name,value,tolerance,status\n";
    for (const json& c : ladder.checks) {
      csv << c["name"].get<std::string>() << ','
          << (c.contains("value") && c["value"].is_number() ? format_number(c["value"].get<double>()) : "") << ','
          << (c.contains("tolerance") ? format_number(c["tolerance"].get<double>()) : "") << ','
          << c["status"].get<std::string>() << '\n';
    }
    emit(csv.str(), common, out);
  } else {
    emit(report.dump(2) + "\n", common, out);
  }
  return ladder.failed ? kExitInvariantFailure : kExitOk;
}

// ---- compile ----

json gate_summary(const GateList& gates) {
  json out = json::array();
  for (const MultiplexorGate& g : gates.gates) {
    out.push_back({{"node", g.node},
                   {"kind", g.kind == GateKind::RotationY ? "MUXRY" : "MUXDENSE"},
                   {"targets", g.targets},
                   {"controls", g.controls},
                   {"control_nodes", g.control_nodes},
                   {"undefined_configurations", g.undefined_configurations}});
  }
  return out;
}

int cmd_compile(const CommonOptions& common, int which, std::ostream& out) {
  const BayesianNetwork net = load_network(common.net_path);
  const Embedding e = make_embedding(net);
  if (common.out_path.empty()) {
    out << serialize(which == 2 ? e.u2 : e.u1);
    return kExitOk;
  }
  const std::string u1_path = common.out_path + ".u1.gates", u2_path = common.out_path + ".u2.gates";
  for (const auto& [path, gates] : {std::pair{u1_path, &e.u1}, std::pair{u2_path, &e.u2}}) {
    std::ofstream file(path);
    if (!file) throw std::invalid_argument("cannot write '" + path + "'");
    file << serialize(*gates);
  }
  json report = envelope("compile", common.net_path);
  report["files"] = {u1_path, u2_path};
  report["u1"] = gate_summary(e.u1);
  report["u2"] = gate_summary(e.u2);
  report["dense_gates"] = !(all_rotation_gates(e.u1) && all_rotation_gates(e.u2));
  out << report.dump(2) << "\n";
  return kExitOk;
}

// ---- sample ----

std::string sampling_csv(const SamplingReport& r) {
  std::ostringstream csv;
  csv << "state,count,empirical,exact,pi\n";
  for (Eigen::Index s = 0; s < r.pi.size(); ++s) {
    csv << s << ',' << r.counts[static_cast<std::size_t>(s)] << ',' << format_number(r.empirical(s)) << ','
        << (r.exact.size() ? format_number(r.exact(s)) : "") << ',' << format_number(r.pi(s)) << '\n';
  }
  return csv.str();
}

int cmd_sample(const CommonOptions& common, const PeOverrides& pe_overrides, const SampleOptions& o,
               std::ostream& out) {
  const BayesianNetwork net = load_network(common.net_path);
  const Assignment x0 = o.x0.empty() ? find_support_point(net) : parse_assignment(o.x0, net);
  const auto start = std::chrono::steady_clock::now();
  SamplingReport report;
  if (o.method == "classical") {
    report = run_classical_sampler(net, o.burn_in, o.shots, o.seed, x0);
  } else {
    GroverConfig cfg;
    cfg.x0 = x0;
    if (o.grover_iters) {
      if (*o.grover_iters < 1) throw std::invalid_argument("--grover-iters must be >= 1");
      cfg.L = *o.grover_iters;
    }
    cfg.shots = o.shots;
    cfg.seed = o.seed;
    cfg.success_check = !o.no_success_check;
    cfg.budget.allow_cap = pe_overrides.allow_cap;
    cfg.pe = resolve_parameters(net, pe_overrides, 1.0 / 16.0);
    report = run_quantum_sampler(net, cfg);
  }
  if (o.timing) {
    report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  if (common.format == "csv") {
    emit(sampling_csv(report), common, out);
  } else {
    json j = envelope("sample", common.net_path);
    j["report"] = to_json(report);
    emit(j.dump(2) + "\n", common, out);
  }
  return kExitOk;
}

// ---- compare ----

std::vector<std::string> expand_paths(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const std::string& pattern : patterns) {
    if (pattern.find_first_of("*?[") == std::string::npos) {
      out.push_back(pattern);
      continue;
    }
    glob_t matches{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &matches);
    if (rc == 0) {
      for (std::size_t k = 0; k < matches.gl_pathc; ++k) out.emplace_back(matches.gl_pathv[k]);
    }
    ::globfree(&matches);
    if (rc != 0) throw ParseError(pattern, "pattern matches no files");
  }
  return out;
}

int cmd_compare(const CommonOptions& common, const CompareCliOptions& o, bool allow_cap, std::ostream& out) {
  CompareOptions options;
  options.eps_target = o.eps_target;
  options.seed = o.seed;
  options.shots = o.shots;
  options.budget.allow_cap = allow_cap;
  std::vector<CompareRow> rows;
  for (const std::string& path : expand_paths(o.paths)) {
    rows.push_back(compare(load_network(path), std::filesystem::path(path).stem().string(), options));
  }
  if (common.format == "json") {
    json j = {{"schema_version", kSchemaVersion}, {"command", "compare"}, {"rows", json::array()}};
    for (const CompareRow& row : rows) j["rows"].push_back(to_json(row));
    emit(j.dump(2) + "\n", common, out);
  } else {
    std::string csv = std::string(kCompareHeader) + "\n";
    for (const CompareRow& row : rows) csv += to_csv_row(row) + "\n";
    emit(csv, common, out);
  }
  return kExitOk;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message,
                  const std::string& field = {}) {
  json j = {{"schema_version", kSchemaVersion}, {"error", kind}, {"message", message}};
  if (!field.empty()) j["field"] = field;
  err << j.dump() << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Gibbs sampling simulator for discrete Bayesian networks"};
  app.require_subcommand(1);

  CommonOptions common;
  PeOverrides pe;
  SampleOptions sample;
  CompareCliOptions cmp;
  std::string matrix;
  int which = 1;
  std::uint64_t verify_seed = 7;

  CommonOptions compare_common;
  compare_common.format = "csv";
  const auto add_common = [&](CLI::App* sub, CommonOptions& target, bool with_net) {
    if (with_net) sub->add_option("net", target.net_path, "Network JSON file")->required();
    sub->add_option("--format", target.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", target.out_path, "Write the report to this file");
  };
  const auto add_pe = [&](CLI::App* sub) {
    sub->add_option("--epsilon2", pe.epsilon2, "Per-reflection error budget ε₂")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--probe-bits", pe.probe_bits, "Probe bits per phase-estimation block (a)");
    sub->add_option("--pe-steps", pe.pe_steps, "Number of phase-estimation blocks (c)");
    sub->add_flag("--allow-cap", pe.allow_cap, "Shrink c, then a, to fit the 24-qubit budget");
  };

  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "Eigenvalues, gap and residuals of M1");
  add_common(spectrum_cmd, common, true);
  spectrum_cmd->add_option("--matrix", matrix, "Export a kernel as CSV instead")
      ->check(CLI::IsMember({"m1", "m2", "lambda1", "lambda2", "hyb"}));

  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the invariant ladder");
  add_common(verify_cmd, common, true);
  add_pe(verify_cmd);
  verify_cmd->add_option("--seed", verify_seed, "Seed for the random perpendicular vectors");

  CLI::App* compile_cmd = app.add_subcommand("compile", "Emit multiplexor gate lists for U1/U2");
  add_common(compile_cmd, common, true);
  compile_cmd->add_option("--which", which, "Gate list printed to stdout when --out is absent")
      ->check(CLI::IsMember({1, 2}));

  CLI::App* sample_cmd = app.add_subcommand("sample", "Run the quantum or classical sampler");
  add_common(sample_cmd, common, true);
  add_pe(sample_cmd);
  sample_cmd->add_option("--method", sample.method, "quantum or classical")
      ->check(CLI::IsMember({"quantum", "classical"}));
  sample_cmd->add_option("--seed", sample.seed, "RNG seed");
  sample_cmd->add_option("--shots", sample.shots, "Number of samples")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--grover-iters", sample.grover_iters, "Override the Grover iteration count L");
  sample_cmd->add_option("--x0", sample.x0, "Start state as comma-separated node values");
  sample_cmd->add_option("--burn-in", sample.burn_in, "Classical sweeps per shot")->check(CLI::NonNegativeNumber);
  sample_cmd->add_flag("--no-success-check", sample.no_success_check, "Measure R2 directly after the loop");
  sample_cmd->add_flag("--timing", sample.timing, "Include wall-clock time in the report");

  CLI::App* compare_cmd = app.add_subcommand("compare", "Quantum vs classical cost, one CSV row per network");
  add_common(compare_cmd, compare_common, false);
  compare_cmd->add_option("nets", cmp.paths, "Network files or glob patterns")->required();
  compare_cmd->add_option("--eps-target", cmp.eps_target, "Target precision")->check(CLI::Range(0.0, 1.0));
  compare_cmd->add_option("--seed", cmp.seed, "RNG seed");
  compare_cmd->add_option("--shots", cmp.shots, "Samples per sampler")->check(CLI::PositiveNumber);
  compare_cmd->add_flag("--allow-cap", pe.allow_cap, "Shrink c, then a, to fit the 24-qubit budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string help;
    for (CLI::App* sub : app.get_subcommands()) help = sub->help();
    report_error(err, "usage", e.what());
    if (!help.empty()) err << help;
    return kExitUsage;
  }
  try {
    if (spectrum_cmd->parsed()) return cmd_spectrum(common, matrix, out);
    if (verify_cmd->parsed()) return cmd_verify(common, pe, verify_seed, out);
    if (compile_cmd->parsed()) return cmd_compile(common, which, out);
    if (sample_cmd->parsed()) return cmd_sample(common, pe, sample, out);
    if (compare_cmd->parsed()) return cmd_compare(compare_common, cmp, pe.allow_cap, out);
  } catch (const ParseError& e) {
    report_error(err, "parse", e.what(), e.field());
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    report_error(err, "budget", e.what());
    return kExitUsage;
  } catch (const DimensionMismatch& e) {
    report_error(err, "dimension", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    report_error(err, "usage", e.what());
    return kExitUsage;
  } catch (const ZeroConditioningEvent& e) {
    report_error(err, "zero_conditioning", e.what());
    return kExitInvariantFailure;
  } catch (const Error& e) {
    report_error(err, "invariant", e.what());
    return kExitInvariantFailure;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return kExitInvariantFailure;
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"qgibbs"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qgibbs
