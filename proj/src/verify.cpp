#include "uncertainty/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <limits>
#include <locale>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "uncertainty/io.hpp"
#include "uncertainty/relations.hpp"
#include "uncertainty/weak.hpp"

namespace unc {

namespace {

struct CheckSpec {
  std::string name;
  CheckKind kind;
};

const std::vector<CheckSpec>& check_specs() {
  static const std::vector<CheckSpec> specs = {
      {"sum_equality", CheckKind::residual},
      {"product_equality", CheckKind::residual},
      {"product_literal", CheckKind::residual},
      {"hr", CheckKind::gap},
      {"schrodinger", CheckKind::gap},
      {"mp_sum", CheckKind::gap},
      {"mp_sum2", CheckKind::gap},
      {"amended_hr", CheckKind::gap},
      {"schlike_sum", CheckKind::gap},
      {"schlike_prod", CheckKind::gap},
      {"schlike_dominance", CheckKind::gap},
      {"first_term_identity", CheckKind::residual},
      {"ladder", CheckKind::residual},
      {"proof_oracle", CheckKind::residual},
      {"weak_sum", CheckKind::gap},
      {"cd_identities", CheckKind::residual},
      {"bound_trace", CheckKind::residual},
  };
  return specs;
}

// Products of variances below this are treated as degenerate for the
// product equality.
constexpr double kProductTrialFloor = 1e-8;

using Results = std::map<std::string, TrialPoint>;

TrialPoint residual_point(double value, double tol) {
  TrialPoint p;
  p.evaluated = true;
  p.value = value;
  p.violated = !(value <= tol);
  return p;
}

TrialPoint gap_point(const BoundSet<double>& b, double tol) {
  TrialPoint p;
  if (!b.applicable || b.degenerate) return p;
  p.evaluated = true;
  p.value = b.gap / b.scale();
  p.saturated = b.saturated;
  p.violated = !(p.value >= -tol);
  return p;
}

Results run_trial(const VerifyConfig& cfg, std::int64_t index) {
  const double tol_r = cfg.tol_residual;
  const double tol_g = cfg.tol_gap;
  auto rng = trial_rng(cfg.trial.seed, static_cast<std::uint64_t>(index));
  const int d = cfg.trial.dim_for(index);

  const CMatrixd a = gue_observable(d, rng);
  const CMatrixd b = gue_observable(d, rng);
  const CVectord psi = haar_state(d, rng);
  const CVectord psi_perp = random_orthogonal_state(psi, rng);
  const auto basis = complement_basis(psi);
  const auto draw = sample_post_selection(psi, rng, cfg.trial.min_overlap);
  const double k = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
  const double tau = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  const CVectord psi_bar = haar_state(d, rng);

  Results out;
  const auto m = moments(a, b, psi);

  const auto sum_eq = sum_equality_residual(a, b, psi, basis);
  out["sum_equality"] = residual_point(sum_eq.relative(), tol_r);

  if (std::sqrt(m.var_a * m.var_b) > kProductTrialFloor) {
    const auto prod_eq = product_equality_residual(a, b, psi, basis);
    out["product_equality"] = residual_point(prod_eq.residual, tol_r);
    if (prod_eq.literal) {
      out["product_literal"] = residual_point(
          prod_eq.literal->residual / std::max(1.0, std::abs(prod_eq.literal->lhs)), tol_r);
    }
  }

  const auto bounds = all_bounds(a, b, psi, psi_perp);
  for (const auto& bs : bounds) out[std::string(to_string(bs.id))] = gap_point(bs, tol_g);

  const auto& schrod = bounds[1];
  const auto& sl_prod = bounds[6];
  if (sl_prod.applicable && !sl_prod.degenerate) {
    TrialPoint p;
    p.evaluated = true;
    p.value = (sl_prod.bound - schrod.bound) / std::max(1.0, std::abs(schrod.bound));
    p.violated = !(p.value >= -tol_g);
    out["schlike_dominance"] = p;
  }

  {
    const double first = first_term(m);
    const double pyth = first_term_pythagorean(m);
    const double scale = std::max(1.0, first);
    double value = std::abs(first - pyth) / scale;
    // dominance over |<[A,B]>| folds into the same residual
    value = std::max(value, std::max(0.0, std::abs(m.comm) - first) / scale);
    out["first_term_identity"] = residual_point(value, tol_r);
  }

  {
    const auto ladder = partial_sum_ladder(a, b, psi, basis);
    bool monotone = true;
    for (std::size_t i = 1; i < ladder.size(); ++i) monotone = monotone && ladder[i] >= ladder[i - 1];
    const double top = std::abs(ladder.back() - sum_eq.rhs) / std::max(1.0, sum_eq.rhs);
    TrialPoint p = residual_point(top, tol_r);
    p.violated = p.violated || !monotone;
    out["ladder"] = p;
  }

  out["proof_oracle"] =
      residual_point(proof_oracle_sum(a, b, psi, basis) / std::max(1.0, sum_eq.lhs), tol_r);

  const PpsEnsemble<double> ens(psi, draw.post);
  const double min_p = cfg.trial.min_overlap;
  {
    const auto fixed = weak_relation_check(a, b, ens, basis.vector(0), min_p);
    const auto random = weak_relation_check(a, b, ens, psi_perp, min_p);
    TrialPoint p = gap_point(fixed.gap / fixed.scale() <= random.gap / random.scale() ? fixed : random,
                             tol_g);
    p.rejections = draw.rejections;
    out["weak_sum"] = p;
  }
  {
    const auto ids = cd_identities(a, b, ens, min_p);
    const double scale = std::max({1.0, std::abs(ids.sym_rhs), std::abs(ids.anti_rhs), ids.mod_rhs});
    TrialPoint p = residual_point(ids.max_residual() / scale, tol_r);
    p.rejections = draw.rejections;
    out["cd_identities"] = p;
  }
  {
    const auto trace = weak_bound_trace(a, b, ens, k, tau, psi_bar, min_p);
    TrialPoint p = residual_point(
        trace.consistency_residual / std::max(1.0, trace.variance_sum), tol_r);
    p.violated = p.violated || !trace.k_star_optimal.value_or(true);
    p.rejections = draw.rejections;
    out["bound_trace"] = p;
  }
  return out;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& s : check_specs()) n.push_back(s.name);
    return n;
  }();
  return names;
}

void VerifyConfig::validate() const {
  trial.validate();
  if (!(tol_residual >= 0.0) || !(tol_gap >= 0.0)) {
    throw Error(ErrorKind::OutOfRange, "tolerances must be nonnegative");
  }
  if (threads < 1) throw Error(ErrorKind::OutOfRange, "threads must be >= 1");
  const auto& known = check_names();
  for (const auto& r : relations) {
    if (std::find(known.begin(), known.end(), r) == known.end()) {
      throw Error(ErrorKind::InvalidArgument, "unknown relation '" + r + "'");
    }
  }
}

std::vector<std::string> VerifyConfig::selected() const {
  std::vector<std::string> out;
  for (const auto& name : check_names()) {
    if (relations.empty() || std::find(relations.begin(), relations.end(), name) != relations.end()) {
      out.push_back(name);
    }
  }
  return out;
}

std::int64_t VerifyReport::total_violations() const {
  std::int64_t n = 0;
  for (const auto& c : checks) n += c.violations;
  return n;
}

VerifyReport run_verify(const VerifyConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t n = config.trial.trials;
  std::vector<Results> results(static_cast<std::size_t>(n));

  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t i = next++; i < n; i = next++) results[static_cast<std::size_t>(i)] = run_trial(config, i);
  };
  if (config.threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < config.threads; ++t) pool.emplace_back(worker);
  }

  VerifyReport report;
  report.config = config;
  const auto names = config.selected();
  std::map<std::string, CheckKind> kinds;
  for (const auto& s : check_specs()) kinds[s.name] = s.kind;

  for (const auto& name : names) {
    CheckAggregate agg;
    agg.name = name;
    agg.kind = kinds[name];
    agg.worst = agg.kind == CheckKind::residual ? 0.0 : std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const auto& res = results[static_cast<std::size_t>(i)];
      const auto it = res.find(name);
      if (it == res.end() || !it->second.evaluated) {
        ++agg.degenerate;
        continue;
      }
      const TrialPoint& p = it->second;
      ++agg.evaluated;
      sum += p.value;
      agg.rejections += p.rejections;
      if (p.saturated) ++agg.saturated;
      if (agg.kind == CheckKind::residual) {
        agg.worst = std::max(agg.worst, p.value);
      } else {
        agg.worst = std::min(agg.worst, p.value);
      }
      if (p.violated) {
        ++agg.violations;
        agg.violating_trials.push_back(i);
      }
    }
    agg.mean = agg.evaluated > 0 ? sum / static_cast<double>(agg.evaluated) : 0.0;
    if (agg.evaluated == 0) agg.worst = std::numeric_limits<double>::quiet_NaN();
    report.checks.push_back(std::move(agg));
  }

  if (config.per_trial) {
    for (std::int64_t i = 0; i < n; ++i) {
      std::vector<TrialPoint> row;
      for (const auto& name : names) {
        const auto& res = results[static_cast<std::size_t>(i)];
        const auto it = res.find(name);
        row.push_back(it == res.end() ? TrialPoint{} : it->second);
      }
      report.trial_values.push_back(std::move(row));
      report.trial_dims.push_back(config.trial.dim_for(i));
    }
  }

  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.generated_at = utc_now();
  return report;
}

std::string report_to_json(const VerifyReport& report, bool canonical) {
  using nlohmann::ordered_json;
  const auto& cfg = report.config;
  ordered_json doc;
  doc["config"] = {
      {"dims", cfg.trial.dims},
      {"trials", cfg.trial.trials},
      {"seed", cfg.trial.seed},
      {"min_overlap", cfg.trial.min_overlap},
      {"tol_residual", cfg.tol_residual},
      {"tol_gap", cfg.tol_gap},
      {"relations", cfg.selected()},
  };
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json violating = ordered_json::array();
    for (auto t : c.violating_trials) violating.push_back({{"seed", cfg.trial.seed}, {"trial", t}});
    ordered_json entry;
    entry["name"] = c.name;
    entry["kind"] = c.kind == CheckKind::residual ? "residual" : "gap";
    entry["evaluated"] = c.evaluated;
    entry["degenerate"] = c.degenerate;
    entry["violations"] = c.violations;
    entry["saturated"] = c.saturated;
    entry["rejections"] = c.rejections;
    entry[c.kind == CheckKind::residual ? "max_residual" : "min_gap"] = number_or_null(c.worst);
    entry[c.kind == CheckKind::residual ? "mean_residual" : "mean_gap"] = number_or_null(c.mean);
    entry["violating_trials"] = violating;
    checks.push_back(entry);
  }
  doc["relations"] = checks;
  doc["summary"] = {{"passed", report.passed()}, {"total_violations", report.total_violations()}};

  if (!report.trial_values.empty()) {
    const auto names = cfg.selected();
    ordered_json rows = ordered_json::array();
    for (std::size_t t = 0; t < report.trial_values.size(); ++t) {
      ordered_json values;
      for (std::size_t c = 0; c < names.size(); ++c) {
        const auto& p = report.trial_values[t][c];
        values[names[c]] = p.evaluated ? number_or_null(p.value) : ordered_json(nullptr);
      }
      rows.push_back({{"trial", t}, {"dim", report.trial_dims[t]}, {"values", values}});
    }
    doc["trials"] = rows;
  }
  if (!canonical) {
    doc["generated_at"] = report.generated_at;
    doc["duration_seconds"] = report.duration_seconds;
  }
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const VerifyReport& report) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "relation,kind,evaluated,degenerate,violations,saturated,rejections,worst,mean\n";
  for (const auto& c : report.checks) {
    out << c.name << ',' << (c.kind == CheckKind::residual ? "residual" : "gap") << ','
        << c.evaluated << ',' << c.degenerate << ',' << c.violations << ',' << c.saturated << ','
        << c.rejections << ',' << format_double(c.worst) << ',' << format_double(c.mean) << '\n';
  }
  return out.str();
}

}  // namespace unc
