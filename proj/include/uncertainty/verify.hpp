#pragma once

// Randomized batch verification of the variance equalities, the bound
// catalog, and the weak-measurement relation, with JSON/CSV reports.

#include <cstdint>
#include <string>
#include <vector>

#include "uncertainty/ensembles.hpp"

namespace unc {

enum class CheckKind { residual, gap };

/// Names of every check `run_verify` knows, in report order.
const std::vector<std::string>& check_names();

struct VerifyConfig {
  TrialConfig trial;
  double tol_residual = 1e-9;
  double tol_gap = 1e-8;
  /// Subset of check_names(); empty selects all.
  std::vector<std::string> relations;
  bool per_trial = false;
  int threads = 1;

  /// Throws Error on invalid trial settings or unknown check names.
  void validate() const;
  std::vector<std::string> selected() const;
};

struct TrialPoint {
  double value = 0.0;  // residual, or gap relative to max(1, target)
  bool evaluated = false;
  bool saturated = false;
  bool violated = false;
  std::int64_t rejections = 0;
};

struct CheckAggregate {
  std::string name;
  CheckKind kind = CheckKind::residual;
  std::int64_t evaluated = 0;
  std::int64_t degenerate = 0;
  std::int64_t violations = 0;
  std::int64_t saturated = 0;
  std::int64_t rejections = 0;
  double worst = 0.0;  // max residual or min relative gap
  double mean = 0.0;   // mean residual or mean relative gap
  std::vector<std::int64_t> violating_trials;
};

struct VerifyReport {
  VerifyConfig config;
  std::vector<CheckAggregate> checks;
  /// trial_values[t][c] is trial t of check c; filled when config.per_trial.
  std::vector<std::vector<TrialPoint>> trial_values;
  std::vector<int> trial_dims;
  double duration_seconds = 0.0;
  std::string generated_at;

  std::int64_t total_violations() const;
  bool passed() const { return total_violations() == 0; }
};

/// Runs every selected check on config.trial.trials randomized instances.
/// Trials are independent; the result does not depend on config.threads.
VerifyReport run_verify(const VerifyConfig& config);

/// Without `canonical` the report carries generated_at and duration_seconds.
std::string report_to_json(const VerifyReport& report, bool canonical);
std::string report_to_csv(const VerifyReport& report);

}  // namespace unc
