// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>

#include "uncertainty/ensembles.hpp"
#include "uncertainty/relations.hpp"
#include "uncertainty/sweep.hpp"
#include "uncertainty/verify.hpp"
#include "uncertainty/weak.hpp"

using namespace unc;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;
std::map<int, std::string> lines;

void report(int id, const char* title, bool ok, const std::string& detail) {
  char head[16];
  std::snprintf(head, sizeof head, "%s %2d ", ok ? "PASS" : "FAIL", id);
  lines[id] = head + std::string(title) + ": " + detail;
  if (!ok) ++failures;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr std::array kDims = {2, 3, 4, 8, 16, 32};
constexpr int kTrials = 10000;
constexpr std::uint64_t kSeed = 20240611;

struct Instance {
  int d;
  CMatrixd a, b;
  CVectord psi, perp;
};

Instance instance(std::uint64_t seed, int t) {
  auto rng = trial_rng(seed, static_cast<std::uint64_t>(t));
  Instance in;
  in.d = kDims[t % kDims.size()];
  in.a = gue_observable(in.d, rng);
  in.b = gue_observable(in.d, rng);
  in.psi = haar_state(in.d, rng);
  in.perp = random_orthogonal_state(in.psi, rng);
  return in;
}

// Criteria 1, 2, 3 and 6 share one trial set.
void closed_system_trials() {
  const auto t0 = Clock::now();
  double sum_worst = 0.0;
  double prod_worst = 0.0, literal_worst = 0.0;
  long prod_evaluated = 0, prod_rejected = 0, literal_evaluated = 0;
  double gap_worst = std::numeric_limits<double>::infinity();
  long gap_violations = 0, dominance_failures = 0, pythagorean_failures = 0;
  long ladder_failures = 0;
  double ladder_end_worst = 0.0;

  for (int t = 0; t < kTrials; ++t) {
    const auto in = instance(kSeed, t);
    const auto basis = complement_basis(in.psi);
    const auto m = moments(in.a, in.b, in.psi);

    const auto s = sum_equality_residual(in.a, in.b, in.psi, basis);
    sum_worst = std::max(sum_worst, s.relative());

    if (std::sqrt(m.var_a * m.var_b) > 1e-8) {
      ++prod_evaluated;
      const auto p = product_equality_residual(in.a, in.b, in.psi, basis);
      prod_worst = std::max(prod_worst, p.residual);
      if (p.literal) {
        ++literal_evaluated;
        literal_worst = std::max(literal_worst, p.literal->residual / std::max(1.0, p.literal->lhs));
      }
    } else {
      ++prod_rejected;
    }

    const auto bounds = all_bounds(in.a, in.b, in.psi, in.perp);
    const BoundSet<double>* schrodinger = nullptr;
    const BoundSet<double>* schlike = nullptr;
    for (const auto& b : bounds) {
      if (b.id == RelationId::schrodinger) schrodinger = &b;
      if (b.id == RelationId::schlike_prod) schlike = &b;
      if (!b.applicable || b.degenerate) continue;
      gap_worst = std::min(gap_worst, b.gap / b.scale());
      if (b.violated(1e-9)) ++gap_violations;
    }
    if (schlike->applicable && !schlike->degenerate &&
        schlike->bound < schrodinger->bound - 1e-10 * std::max(1.0, schrodinger->bound)) {
      ++dominance_failures;
    }
    const double ft = first_term(m);
    if (std::abs(ft - first_term_pythagorean(m)) > 1e-10 * std::max(1.0, ft) ||
        ft < std::abs(m.comm) - 1e-10 * std::max(1.0, ft)) {
      ++pythagorean_failures;
    }

    const auto ladder = partial_sum_ladder(in.a, in.b, in.psi, basis);
    for (std::size_t k = 1; k < ladder.size(); ++k) {
      if (ladder[k] < ladder[k - 1]) {
        ++ladder_failures;
        break;
      }
    }
    ladder_end_worst = std::max(ladder_end_worst, std::abs(ladder.back() - s.rhs));
  }
  const double elapsed = seconds_since(t0);

  report(1, "sum variance equality", sum_worst < 1e-9,
         "max relative residual " + num(sum_worst) + " over " + std::to_string(kTrials) +
             " trials, d in {2,3,4,8,16,32}, " + num(elapsed) + " s");
  report(2, "product variance equality", prod_worst < 1e-9 && literal_worst < 1e-9,
         "max residual " + num(prod_worst) + " on " + std::to_string(prod_evaluated) +
             " trials (" + std::to_string(prod_rejected) + " rejected), quotient form " +
             num(literal_worst) + " on " + std::to_string(literal_evaluated));
  report(3, "bound catalog", gap_violations == 0 && dominance_failures == 0 && pythagorean_failures == 0,
         std::to_string(gap_violations) + " gap violations (min relative gap " + num(gap_worst) +
             "), " + std::to_string(dominance_failures) + " dominance failures, " +
             std::to_string(pythagorean_failures) + " first-term identity failures");
  report(6, "partial-sum ladder", ladder_failures == 0 && ladder_end_worst < 1e-10,
         std::to_string(ladder_failures) + " non-monotone ladders, full ladder off by " +
             num(ladder_end_worst));
}

void worked_qubit_equalities() {
  const CVectord zero = CVectord::Unit(2, 0);
  const auto basis = complement_basis(zero);
  const auto xy = sum_equality_residual(pauli_x(), pauli_y(), zero, basis);
  const auto xz = sum_equality_residual(pauli_x(), pauli_z(), zero, basis);
  const double xy_first = first_term(moments(pauli_x(), pauli_y(), zero));
  const double xz_first = first_term(moments(pauli_x(), pauli_z(), zero));
  const double err = std::max({std::abs(xy.lhs - 2.0), std::abs(xy_first - 2.0),
                               std::abs(xy.basis_terms[0]), std::abs(xz.lhs - 1.0),
                               std::abs(xz_first), std::abs(xz.basis_terms[0] - 1.0)});
  report(4, "worked qubit equalities", err < 1e-12,
         "(x,y,|0>): 2 = " + num(xy_first) + " + " + num(xy.basis_terms[0]) +
             "; (x,z,|0>): 1 = " + num(xz_first) + " + " + num(xz.basis_terms[0]) +
             "; max error " + num(err));
}

void basis_invariance() {
  double worst = 0.0;
  int remixes = 0;
  for (int t = 0; t < 2 * static_cast<int>(kDims.size()); ++t) {
    const auto in = instance(kSeed + 1, t);
    const auto basis = complement_basis(in.psi);
    const auto s0 = sum_equality_residual(in.a, in.b, in.psi, basis);
    const auto p0 = product_equality_residual(in.a, in.b, in.psi, basis);
    auto rng = trial_rng(kSeed + 2, static_cast<std::uint64_t>(t));
    for (int u = 0; u < 100; ++u) {
      const auto mixed = basis.remixed(haar_unitary(in.d - 1, rng));
      const auto s1 = sum_equality_residual(in.a, in.b, in.psi, mixed);
      const auto p1 = product_equality_residual(in.a, in.b, in.psi, mixed);
      worst = std::max({worst, std::abs(s1.residual - s0.residual),
                        std::abs(p1.residual - p0.residual)});
      ++remixes;
    }
  }
  report(5, "complement basis invariance", worst < 1e-10,
         "max residual change " + num(worst) + " over " + std::to_string(remixes) + " remixes");
}

struct WeakInstance {
  int d;
  CMatrixd a, b;
  CVectord pre, post;
  std::int64_t rejections;
};

WeakInstance weak_instance(int d, std::mt19937_64& rng) {
  WeakInstance w;
  w.d = d;
  w.a = gue_observable(d, rng);
  w.b = gue_observable(d, rng);
  w.pre = haar_state(d, rng);
  const auto draw = sample_post_selection(w.pre, rng, 1e-3);
  w.post = draw.post;
  w.rejections = draw.rejections;
  return w;
}

void weak_relation() {
  constexpr std::array dims = {2, 4, 8};
  long violations = 0, checks = 0, rejections = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < kTrials; ++t) {
    auto rng = trial_rng(kSeed + 3, static_cast<std::uint64_t>(t));
    const auto w = weak_instance(dims[t % dims.size()], rng);
    rejections += w.rejections;
    const PpsEnsemble<double> ens(w.pre, w.post);
    std::vector<CVectord> perps{complement_basis(w.pre).vector(0)};
    for (int j = 0; j < 3; ++j) perps.push_back(random_orthogonal_state(w.pre, rng));
    for (const auto& perp : perps) {
      const auto b = weak_relation_check(w.a, w.b, ens, perp);
      worst = std::min(worst, b.gap / b.scale());
      if (b.violated(1e-8)) ++violations;
      ++checks;
    }
  }
  const CVectord zero = CVectord::Unit(2, 0);
  CVectord plus(2);
  plus << std::sqrt(0.5), std::sqrt(0.5);
  const auto worked = weak_relation_check(pauli_x(), pauli_y(), PpsEnsemble<double>(zero, plus),
                                          CVectord(CVectord::Unit(2, 1)));
  const double worked_err = std::max(std::abs(worked.target - 2.0), std::abs(worked.bound - 2.0));
  report(7, "weak-measurement sum relation", violations == 0 && worked_err < 1e-12,
         std::to_string(violations) + " violations in " + std::to_string(checks) +
             " checks (min relative gap " + num(worst) + ", " + std::to_string(rejections) +
             " post-selections resampled); worked case off by " + num(worked_err));
}

void derivation_identities() {
  double cd_worst = 0.0, trace_worst = 0.0;
  long not_optimal = 0;
  for (int t = 0; t < 1000; ++t) {
    auto rng = trial_rng(kSeed + 4, static_cast<std::uint64_t>(t));
    const int d = 2 + t % 15;
    const auto w = weak_instance(d, rng);
    const PpsEnsemble<double> ens(w.pre, w.post);
    const auto r = cd_identities(w.a, w.b, ens);
    cd_worst = std::max(cd_worst, r.max_residual());

    std::uniform_real_distribution<double> uk(-2.0, 2.0), ut(0.0, 2.0 * std::numbers::pi);
    const double k = uk(rng);
    const double tau = ut(rng);
    const CVectord bar = haar_state(d, rng);
    const auto tr = weak_bound_trace(w.a, w.b, ens, k, tau, bar);
    trace_worst = std::max(trace_worst, tr.consistency_residual);
    if (!tr.k_star_optimal.value_or(false)) ++not_optimal;
  }
  report(8, "weak derivation identities", cd_worst < 1e-9 && trace_worst < 1e-10 && not_optimal == 0,
         "CD identities " + num(cd_worst) + ", expansion consistency " + num(trace_worst) + ", " +
             std::to_string(not_optimal) + " non-optimal k* over 1000 probes");
}

void determinism() {
  VerifyConfig cfg;
  cfg.trial.dims = {2, 3, 4, 8};
  cfg.trial.trials = 400;
  cfg.trial.seed = 42;
  cfg.per_trial = true;
  const auto first = report_to_json(run_verify(cfg), true);
  cfg.threads = 4;
  const auto second = report_to_json(run_verify(cfg), true);
  report(9, "deterministic reports", first == second,
         std::to_string(first.size()) + " bytes, runs " + (first == second ? "identical" : "differ"));
}

void sweep() {
  SweepConfig cfg;
  cfg.a = pauli_x();
  cfg.b = pauli_y();
  cfg.pre = parse_state_spec("0");
  const auto t0 = Clock::now();
  const auto grid = run_sweep(cfg);
  const double elapsed = seconds_since(t0);
  report(10, "qubit post-selection sweep", elapsed < 5.0 && grid.violation_count() == 0,
         std::to_string(grid.rows.size()) + " rows in " + num(elapsed) + " s, " +
             std::to_string(grid.rejected_count()) + " rejected, " +
             std::to_string(grid.violation_count()) + " violations");
}

}  // namespace

int main() {
  closed_system_trials();
  worked_qubit_equalities();
  basis_invariance();
  weak_relation();
  derivation_identities();
  determinism();
  sweep();
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("%s\n", failures == 0 ? "ALL PASS" : (std::to_string(failures) + " FAILED").c_str());
  return failures == 0 ? 0 : 1;
}
