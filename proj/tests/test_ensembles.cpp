#include <doctest.h>

#include <cstring>
#include <numbers>

#include "uncertainty/ensembles.hpp"

using namespace unc;

namespace {

bool same_bits(const CMatrixd& a, const CMatrixd& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(Complexd) * a.size()) == 0;
}

}  // namespace

TEST_CASE("haar states are normalized and seed-deterministic") {
  for (int d : {2, 3, 8, 32}) {
    auto rng1 = trial_rng(42, 7);
    auto rng2 = trial_rng(42, 7);
    const CVectord a = haar_state(d, rng1);
    const CVectord b = haar_state(d, rng2);
    CHECK(std::abs(a.norm() - 1.0) < 1e-12);
    CHECK(same_bits(a, b));
  }
  auto rng = trial_rng(1, 0);
  CHECK_THROWS_AS(haar_state(1, rng), Error);
}

TEST_CASE("haar states have uniform mean populations at d = 4") {
  auto rng = trial_rng(2024, 0);
  constexpr int kSamples = 100000;
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  for (int s = 0; s < kSamples; ++s) {
    const CVectord psi = haar_state(4, rng);
    for (int k = 0; k < 4; ++k) mean(k) += std::norm(psi(k));
  }
  mean /= kSamples;
  for (int k = 0; k < 4; ++k) CHECK(std::abs(mean(k) - 0.25) < 0.01);
}

TEST_CASE("gue observables are Hermitian, deterministic, and centered") {
  auto rng1 = trial_rng(9, 3);
  auto rng2 = trial_rng(9, 3);
  const CMatrixd h1 = gue_observable(5, rng1);
  const CMatrixd h2 = gue_observable(5, rng2);
  CHECK(is_hermitian(h1, 1e-12));
  CHECK(same_bits(h1, h2));

  auto rng = trial_rng(77, 0);
  constexpr int kSamples = 10000;
  double diag_sum = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    const CMatrixd h = gue_observable(2, rng);
    diag_sum += h(0, 0).real() + h(1, 1).real();
  }
  CHECK(std::abs(diag_sum / (2.0 * kSamples)) < 0.05);
  CHECK_THROWS_AS(gue_observable(1, rng), Error);
}

TEST_CASE("trial streams differ across trials and seeds") {
  auto a = trial_rng(1, 0);
  auto b = trial_rng(1, 1);
  auto c = trial_rng(2, 0);
  const auto x = a();
  CHECK(x != b());
  CHECK(x != c());
}

TEST_CASE("bloch states") {
  const CVectord north = bloch_state(0.0, 1.234);
  CHECK(std::abs(north(0) - 1.0) < 1e-15);
  CHECK(std::abs(north(1)) < 1e-15);

  const CVectord south = bloch_state(std::numbers::pi, 0.0);
  CHECK(std::abs(south(0)) < 1e-15);
  CHECK(std::abs(std::abs(south(1)) - 1.0) < 1e-15);

  const CVectord equator = bloch_state(std::numbers::pi / 2, 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(equator(0) - r) < 1e-15);
  CHECK(std::abs(equator(1) - r) < 1e-15);

  // angles beyond 2 pi wrap
  const CVectord wrapped = bloch_state(std::numbers::pi / 2, 2.0 * std::numbers::pi + 0.3);
  CHECK((wrapped - bloch_state(std::numbers::pi / 2, 0.3)).norm() < 1e-14);
}

TEST_CASE("pauli algebra") {
  const Complexd i(0, 1);
  const CMatrixd x = named_operator("pauli-x", 2).matrix;
  const CMatrixd y = named_operator("pauli-y", 2).matrix;
  const CMatrixd z = named_operator("pauli-z", 2).matrix;
  const CMatrixd id = CMatrixd::Identity(2, 2);
  CHECK((x * y - i * z).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((y * z - i * x).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((z * x - i * y).cwiseAbs().maxCoeff() <= 1e-15);
  for (const auto& s : {x, y, z}) CHECK((s * s - id).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("catalog operators are Hermitian at every dimension") {
  for (const auto& name : operator_names()) {
    for (int d = 2; d <= 7; ++d) {
      if (name.starts_with("pauli-") && d != 2) continue;
      const auto op = named_operator(name, d);
      CHECK(op.name == name);
      CHECK(op.matrix.rows() == d);
      CHECK(is_hermitian(op.matrix, 1e-12));
    }
  }
}

TEST_CASE("clock and shift parts are incompatible at d = 5") {
  const CMatrixd a = named_operator("clock-re", 5).matrix;
  const CMatrixd b = named_operator("shift-re", 5).matrix;
  CHECK((a * b - b * a).cwiseAbs().maxCoeff() > 0.1);
  // at d = 2 the clock is sigma_z and the shift is sigma_x
  CHECK((named_operator("clock-re", 2).matrix - pauli_z()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((named_operator("shift-re", 2).matrix - pauli_x()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("catalog errors") {
  try {
    named_operator("pauli-q", 2);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
  try {
    named_operator("pauli-x", 3);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfRange);
  }
}

TEST_CASE("haar unitaries are unitary") {
  auto rng = trial_rng(5, 5);
  for (int d : {1, 2, 5, 12}) {
    const CMatrixd u = haar_unitary(d, rng);
    CHECK((u.adjoint() * u - CMatrixd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("random orthogonal states") {
  auto rng = trial_rng(8, 1);
  for (int d : {2, 3, 16}) {
    const CVectord psi = haar_state(d, rng);
    const CVectord perp = random_orthogonal_state(psi, rng);
    CHECK(std::abs(perp.norm() - 1.0) < 1e-14);
    CHECK(std::abs(psi.dot(perp)) < 1e-14);
  }
}

TEST_CASE("post-selection rejection sampling honours the floor and counts rejections") {
  auto rng = trial_rng(3, 0);
  const CVectord pre = haar_state(4, rng);
  std::int64_t total_rejections = 0;
  for (int s = 0; s < 20; ++s) {
    const auto draw = sample_post_selection(pre, rng, 0.6);
    CHECK(std::norm(draw.post.dot(pre)) >= 0.6);
    total_rejections += draw.rejections;
  }
  CHECK(total_rejections > 0);
  CHECK_THROWS_AS(sample_post_selection(pre, rng, 0.0), Error);
  CHECK_THROWS_AS(sample_post_selection(pre, rng, 1.5), Error);
}

TEST_CASE("trial config validation") {
  TrialConfig cfg;
  cfg.dims = {2, 3};
  cfg.trials = 10;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.dim_for(0) == 2);
  CHECK(cfg.dim_for(3) == 3);
  cfg.dims = {1};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.dims = {2};
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.trials = 1;
  cfg.min_overlap = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
