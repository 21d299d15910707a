// uncertainty: batch verification, post-selection sweeps, and worked demos.
//
// Exit codes: 0 success, 1 violation found, 2 configuration error, 3 I/O error.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uncertainty/demo.hpp"
#include "uncertainty/ensembles.hpp"
#include "uncertainty/io.hpp"
#include "uncertainty/sweep.hpp"
#include "uncertainty/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    int d = 0;
    try {
      d = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) {
      throw unc::Error(unc::ErrorKind::InvalidArgument, "malformed dimension '" + item + "'");
    }
    dims.push_back(d);
  }
  return dims;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw unc::IoError("failed to write to stdout");
  } else {
    unc::write_file_atomic(out_path, content);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of variance-based uncertainty equalities and relations"};
  app.require_subcommand(1);

  // verify
  std::string dims_text = "2";
  std::int64_t trials = 1000;
  std::uint64_t seed = 42;
  double tol_residual = 1e-9;
  double tol_gap = 1e-8;
  double min_overlap = 1e-3;
  std::string out_path;
  std::string format = "json";
  std::string relations_text;
  bool canonical = false;
  bool per_trial = false;
  int threads = 1;

  auto* verify = app.add_subcommand("verify", "Run randomized equality, bound, and identity checks");
  verify->add_option("--dim", dims_text, "Dimension, or comma list cycled across trials")
      ->capture_default_str();
  verify->add_option("--trials", trials, "Number of random trials")->capture_default_str();
  verify->add_option("--seed", seed, "Master seed")->capture_default_str();
  verify->add_option("--tol-residual", tol_residual, "Tolerance on equality residuals")
      ->capture_default_str();
  verify->add_option("--tol-gap", tol_gap, "Relative tolerance on inequality gaps")
      ->capture_default_str();
  verify->add_option("--min-overlap", min_overlap, "Post-selection probability floor")
      ->capture_default_str();
  verify->add_option("--out", out_path, "Report path (stdout when omitted)");
  verify->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  verify->add_option("--relations", relations_text, "Comma list of checks (default: all)");
  verify->add_flag("--canonical", canonical, "Omit timestamp and duration from the report");
  verify->add_flag("--per-trial", per_trial, "Include per-trial values in the JSON report");
  verify->add_option("--threads", threads, "Worker threads")->capture_default_str();

  // sweep
  std::string a_name = "pauli-x";
  std::string b_name = "pauli-y";
  std::string a_file, b_file, pre_file;
  std::string pre_spec = "0";
  bool normalize = false;
  int theta_steps = 181;
  int phi_steps = 181;
  double sweep_tol_gap = 1e-8;
  double sweep_min_overlap = 1e-3;
  std::string sweep_out;
  std::string sweep_format = "csv";
  int sweep_dim = 2;

  auto* sweep = app.add_subcommand("sweep", "Sweep the weak-measurement relation over qubit post-selections");
  sweep->add_option("--a", a_name, "Named observable A")->capture_default_str();
  sweep->add_option("--b", b_name, "Named observable B")->capture_default_str();
  sweep->add_option("--a-file", a_file, "JSON file with a custom observable A");
  sweep->add_option("--b-file", b_file, "JSON file with a custom observable B");
  sweep->add_option("--pre", pre_spec, "Pre-selection: 0, 1, +, -, +i, -i, or bloch:THETA,PHI")
      ->capture_default_str();
  sweep->add_option("--pre-file", pre_file, "JSON file with a custom pre-selected state");
  sweep->add_flag("--normalize", normalize, "Rescale a custom state to unit norm");
  sweep->add_option("--dim", sweep_dim, "Hilbert-space dimension (2 only)")->capture_default_str();
  sweep->add_option("--theta-steps", theta_steps, "Grid points in theta over [0, pi]")
      ->capture_default_str();
  sweep->add_option("--phi-steps", phi_steps, "Grid points in phi over [0, 2 pi)")
      ->capture_default_str();
  sweep->add_option("--tol-gap", sweep_tol_gap, "Relative tolerance on gaps")->capture_default_str();
  sweep->add_option("--min-overlap", sweep_min_overlap, "Post-selection probability floor")
      ->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output path (stdout when omitted)");
  sweep->add_option("--format", sweep_format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  // demo
  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Print a worked qubit example");
  demo->add_option("name", demo_name, "pauli-equalities or pauli-weak")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*verify) {
      unc::VerifyConfig cfg;
      cfg.trial.dims = parse_dims(dims_text);
      cfg.trial.trials = trials;
      cfg.trial.seed = seed;
      cfg.trial.min_overlap = min_overlap;
      cfg.tol_residual = tol_residual;
      cfg.tol_gap = tol_gap;
      cfg.relations = split_list(relations_text);
      cfg.per_trial = per_trial;
      cfg.threads = threads;
      cfg.validate();

      const auto report = unc::run_verify(cfg);
      emit(out_path, format == "json" ? unc::report_to_json(report, canonical)
                                      : unc::report_to_csv(report));
      if (!report.passed()) {
        std::cerr << "verify: " << report.total_violations() << " violation(s)\n";
        return kExitViolation;
      }
      return kExitOk;
    }

    if (*sweep) {
      if (sweep_dim != 2) {
        throw unc::Error(unc::ErrorKind::OutOfRange, "sweeps support dim 2 only");
      }
      unc::SweepConfig cfg;
      cfg.a_name = a_file.empty() ? a_name : a_file;
      cfg.b_name = b_file.empty() ? b_name : b_file;
      cfg.a = a_file.empty() ? unc::named_operator(a_name, 2).matrix : unc::load_observable(a_file);
      cfg.b = b_file.empty() ? unc::named_operator(b_name, 2).matrix : unc::load_observable(b_file);
      cfg.pre_spec = pre_file.empty() ? pre_spec : pre_file;
      cfg.pre = pre_file.empty() ? unc::parse_state_spec(pre_spec)
                                 : unc::load_state(pre_file, normalize);
      cfg.theta_steps = theta_steps;
      cfg.phi_steps = phi_steps;
      cfg.tol_gap = sweep_tol_gap;
      cfg.min_overlap = sweep_min_overlap;

      const auto grid = unc::run_sweep(cfg);
      emit(sweep_out, sweep_format == "csv" ? unc::sweep_to_csv(grid) : unc::sweep_to_json(grid));
      if (grid.violation_count() > 0) {
        std::cerr << "sweep: " << grid.violation_count() << " violation(s)\n";
        return kExitViolation;
      }
      return kExitOk;
    }

    if (*demo) {
      std::cout << unc::run_demo(demo_name);
      return kExitOk;
    }
  } catch (const unc::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const unc::Error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
