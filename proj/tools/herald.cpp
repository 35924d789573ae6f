// herald: command-line front end for the heralded single-photon simulator.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "herald/analysis.hpp"
#include "herald/errors.hpp"
#include "herald/io.hpp"
#include "herald/verify.hpp"

namespace {

using herald::io::json;

constexpr int kExitFailedChecks = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPhysics = 3;

struct RunOptions {
  std::string scheme = "main";
  double p = 1.0;
  std::string tpam = "generic:alpha=1,beta=0";
  std::string theta0 = "45deg";
  std::string phi0 = "0";
  std::string theta1 = "45deg";
  std::string phi1 = "0";
  std::optional<std::string> theta2;
  std::optional<std::string> phi2;
  std::string constraint = "sum_plus";
  std::optional<double> length;
  std::optional<int> cutoff;
  std::string config_path;
  std::string output;
};

struct SweepOptions {
  std::string spec_path;
  std::string output;
  std::string manifest;
  bool points = false;
  bool serial = false;
};

struct VerifyOptions {
  std::string suite = "reference-values";
  int draws = 100;
  std::uint64_t seed = 20251015;
  std::string json_path;
};

struct OptimizeOptions {
  std::string beta = "0";
  std::string constraint = "sum_plus";
  std::string objective = "closed-form";
};

struct ScanOptions {
  std::string target = "main";
  std::size_t count = 20;
  std::string output;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw herald::ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw herald::ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

/// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw herald::ConfigError("cannot write '" + path + "'");
  out << text;
}

herald::SchemeConfig config_from_flags(const RunOptions& o) {
  herald::SchemeConfig cfg;
  cfg.variant = herald::parse_scheme_variant(o.scheme);
  cfg.source.p = o.p;
  cfg.cutoff = o.cutoff.value_or(herald::io::default_cutoff());
  if (cfg.cutoff < 1) throw herald::ConfigError("cutoff must be a positive integer");
  cfg.appendix_length = o.length;
  cfg.tpam = herald::parse_tpam_spec(o.tpam);
  cfg.bs0 = {herald::io::parse_angle(o.theta0), herald::io::parse_angle(o.phi0)};

  const double theta1 = herald::io::parse_angle(o.theta1);
  const double phi1 = herald::io::parse_angle(o.phi1);
  if (o.theta2) {
    cfg.bs1 = {theta1, phi1};
    cfg.bs2 = {herald::io::parse_angle(*o.theta2), o.phi2 ? herald::io::parse_angle(*o.phi2) : phi1};
  } else {
    // Snap BS2 onto the requested null-condition manifold.
    const auto kind = herald::parse_constraint_kind(o.constraint);
    auto [bs1, bs2] = herald::constrained_splitters(theta1, kind);
    cfg.bs1 = {bs1.theta, phi1};
    cfg.bs2 = {bs2.theta, phi1 + bs2.phi};
    if (o.phi2) throw herald::ConfigError("--phi2 needs an explicit --theta2");
  }
  return cfg;
}

int cmd_run(const RunOptions& o, const std::vector<std::string>& command) {
  herald::SchemeConfig cfg;
  if (!o.config_path.empty()) {
    const json j = read_json_file(o.config_path);
    cfg = herald::io::config_from_json(j.contains("config") ? j.at("config") : j);
  } else {
    cfg = config_from_flags(o);
  }
  const herald::SchemeResult r = herald::run_scheme(cfg);
  const json canonical = herald::io::config_to_json(cfg);
  const json manifest = herald::io::make_manifest("run", command, canonical, herald::io::result_to_json(cfg, r));
  emit(o.output, manifest.dump(2) + "\n");
  if (!o.output.empty() && o.output != "-") {
    std::printf("p_success = %.10g  fidelity = %.10g  -> %s\n", r.p_success, r.fidelity, o.output.c_str());
  }
  return 0;
}

int cmd_sweep(const SweepOptions& o, const std::vector<std::string>& command) {
  const herald::SweepSpec spec = herald::io::sweep_from_json(read_json_file(o.spec_path));
  const auto rows = herald::run_sweep(spec, o.serial ? herald::Execution::serial : herald::Execution::parallel);
  std::ostringstream table;
  if (o.points) {
    herald::io::write_sweep_points(table, rows);
  } else {
    herald::io::write_sweep_csv(table, rows);
  }
  emit(o.output, table.str());
  if (!o.manifest.empty()) {
    json summary = {{"rows", rows.size()}, {"format", o.points ? "points" : "csv"}, {"table", o.output}};
    const json m = herald::io::make_manifest("sweep", command, herald::io::sweep_to_json(spec), summary);
    emit(o.manifest, m.dump(2) + "\n");
  }
  return 0;
}

int cmd_verify(const VerifyOptions& o) {
  std::vector<herald::verify::CheckResult> checks;
  if (o.suite == "reference-values" || o.suite == "paper-values") {
    checks = herald::verify::run_reference_values();
  } else {
    checks = herald::verify::run_invariants(o.draws, o.seed);
  }
  int failed = 0;
  for (const auto& c : checks) {
    std::cout << herald::verify::format_line(c) << "\n";
    failed += c.pass ? 0 : 1;
  }
  std::cout << (checks.size() - static_cast<std::size_t>(failed)) << "/" << checks.size() << " checks passed\n";
  if (!o.json_path.empty()) emit(o.json_path, herald::io::checks_to_json(checks).dump(2) + "\n");
  return failed == 0 ? 0 : kExitFailedChecks;
}

int cmd_optimize(const OptimizeOptions& o) {
  const auto beta = herald::parse_complex_literal(o.beta);
  const auto kind = herald::parse_constraint_kind(o.constraint);
  const auto objective = o.objective == "simulator" ? herald::Objective::simulator : herald::Objective::closed_form;
  const herald::Optimum best = herald::optimize_ps(beta, kind, objective);
  const json j = {{"beta", herald::format_complex_literal(beta)},
                  {"constraint", std::string(herald::to_string(kind))},
                  {"objective", o.objective},
                  {"theta1_rad", best.argmax},
                  {"theta1_deg", best.argmax * 180.0 / std::numbers::pi},
                  {"ps_over_p2", best.value}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_scan(const ScanOptions& o) {
  herald::JfScanTarget target = herald::JfScanTarget::main_scheme;
  if (o.target == "appendix-a") target = herald::JfScanTarget::appendix_a;
  if (o.target == "appendix-b") target = herald::JfScanTarget::appendix_b;
  const auto rows = herald::jf_length_scan(herald::jf_lengths(target, o.count), target);
  std::ostringstream out;
  out << "length_multiple,coefficient_re,coefficient_im,ps_over_p2,running_max\r\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\r\n", r.length_multiple, r.coefficient.real(),
                  r.coefficient.imag(), r.ps_over_p2, r.running_max);
    out << buf;
  }
  emit(o.output, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heralded single-photon source simulator"};
  app.set_version_flag("--version", std::string(herald::io::kToolVersion));
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scheme configuration and write a JSON manifest");
  auto* scheme_opt = run_cmd->add_option("--scheme", run.scheme, "main | doubled | appendix-a | appendix-b")
                         ->check(CLI::IsMember({"main", "doubled", "appendix-a", "appendix-b"}));
  std::vector<CLI::Option*> config_flags{scheme_opt};
  config_flags.push_back(run_cmd->add_option("--p", run.p, "Source efficiency in [0, 1]"));
  config_flags.push_back(run_cmd->add_option("--tpam", run.tpam, "generic:alpha=..,beta=.. or jf:M=..,condition=(i,j)"));
  config_flags.push_back(run_cmd->add_option("--theta0", run.theta0, "BS0 angle (e.g. 45deg)"));
  config_flags.push_back(run_cmd->add_option("--phi0", run.phi0, "BS0 phase"));
  config_flags.push_back(run_cmd->add_option("--theta1", run.theta1, "BS1 angle"));
  config_flags.push_back(run_cmd->add_option("--phi1", run.phi1, "BS1 phase"));
  config_flags.push_back(run_cmd->add_option("--theta2", run.theta2, "BS2 angle (default: derived from --case)"));
  config_flags.push_back(run_cmd->add_option("--phi2", run.phi2, "BS2 phase (with --theta2)"));
  config_flags.push_back(run_cmd->add_option("--case", run.constraint, "Null-condition family used to derive BS2")
                             ->check(CLI::IsMember({"sum_plus", "sum_minus", "diff_plus", "diff_minus"})));
  config_flags.push_back(run_cmd->add_option("--length", run.length, "Medium length in units of L0 (appendix schemes)"));
  config_flags.push_back(run_cmd->add_option("--cutoff", run.cutoff, "Per-mode photon cutoff (default FOCK_CUTOFF or 4)"));
  auto* config_opt = run_cmd->add_option("--config", run.config_path, "Re-run the config stored in a manifest")
                         ->check(CLI::ExistingFile);
  for (auto* f : config_flags) config_opt->excludes(f);
  run_cmd->add_option("-o,--output", run.output, "Output file (default stdout)");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a parameter grid and write a CSV table");
  sweep_cmd->add_option("spec", sweep.spec_path, "Sweep specification (JSON)")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("-o,--output", sweep.output, "Output table (default stdout)");
  sweep_cmd->add_option("--manifest", sweep.manifest, "Also write a JSON manifest for the sweep");
  sweep_cmd->add_flag("--points", sweep.points, "Whitespace-separated columns instead of CSV");
  sweep_cmd->add_flag("--serial", sweep.serial, "Evaluate grid points on one thread");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("--suite", verify.suite, "reference-values | invariants")
      ->check(CLI::IsMember({"reference-values", "paper-values", "invariants"}));
  verify_cmd->add_option("--draws", verify.draws, "Random draws per invariant")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify.seed, "Seed for the invariant suite");
  verify_cmd->add_option("--json", verify.json_path, "Also write the report as JSON");

  OptimizeOptions optimize;
  auto* optimize_cmd = app.add_subcommand("optimize", "Best theta1 and P_s/p^2 for an absorber");
  optimize_cmd->add_option("--beta", optimize.beta, "Two-photon survival amplitude");
  optimize_cmd->add_option("--case", optimize.constraint, "Null-condition family")
      ->check(CLI::IsMember({"sum_plus", "sum_minus", "diff_plus", "diff_minus"}));
  optimize_cmd->add_option("--objective", optimize.objective, "closed-form | simulator")
      ->check(CLI::IsMember({"closed-form", "simulator"}));

  ScanOptions scan;
  auto* scan_cmd = app.add_subcommand("scan", "Tabulate success probability against medium length");
  scan_cmd->add_option("--target", scan.target, "main | appendix-a | appendix-b")
      ->check(CLI::IsMember({"main", "appendix-a", "appendix-b"}));
  scan_cmd->add_option("--count", scan.count, "Number of lengths")->check(CLI::PositiveNumber);
  scan_cmd->add_option("-o,--output", scan.output, "Output table (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::vector<std::string> command(argv + 1, argv + argc);
  try {
    if (run_cmd->parsed()) return cmd_run(run, command);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, command);
    if (verify_cmd->parsed()) return cmd_verify(verify);
    if (optimize_cmd->parsed()) return cmd_optimize(optimize);
    if (scan_cmd->parsed()) return cmd_scan(scan);
  } catch (const herald::PhysicsError& e) {
    std::cerr << "herald: physics error: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const std::invalid_argument& e) {
    std::cerr << "herald: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "herald: malformed JSON input: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
