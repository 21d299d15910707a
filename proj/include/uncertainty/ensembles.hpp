#pragma once

// Seeded random states and observables, plus the catalog of named operators.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/QR>

#include "uncertainty/kernel.hpp"

namespace unc {

/// Batch of randomized trials. Trial i runs at dimension dims[i % dims.size()].
struct TrialConfig {
  std::vector<int> dims{2};
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  double min_overlap = 1e-3;

  int dim_for(std::int64_t trial) const {
    return dims[static_cast<std::size_t>(trial % static_cast<std::int64_t>(dims.size()))];
  }

  /// Throws Error(OutOfRange) on dim < 2, trials < 1, or min_overlap outside (0, 1].
  void validate() const;
};

/// Independent generator for one trial, a pure function of (seed, trial).
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

/// Complex normal with E|z|^2 = 1.
template <typename Real = double, typename Rng>
Complex<Real> complex_normal(Rng& rng) {
  std::normal_distribution<Real> normal(Real(0), std::sqrt(Real(0.5)));
  const Real re = normal(rng);
  const Real im = normal(rng);
  return {re, im};
}

template <typename Real = double, typename Rng>
CMatrix<Real> ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix<Real> g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = complex_normal<Real>(rng);
  }
  return g;
}

/// Uniform state on the unit sphere of C^dim.
template <typename Real = double, typename Rng>
CVector<Real> haar_state(int dim, Rng& rng) {
  if (dim < 2) throw Error(ErrorKind::OutOfRange, "haar_state needs dim >= 2");
  CVector<Real> psi = ginibre<Real>(dim, 1, rng);
  return psi / psi.norm();
}

/// H = (G + G^dagger)/2 with G complex Ginibre.
template <typename Real = double, typename Rng>
CMatrix<Real> gue_observable(int dim, Rng& rng) {
  if (dim < 2) throw Error(ErrorKind::OutOfRange, "gue_observable needs dim >= 2");
  const CMatrix<Real> g = ginibre<Real>(dim, dim, rng);
  return (g + g.adjoint()) / Real(2);
}

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix,
/// with the phases of R's diagonal moved into Q.
template <typename Real = double, typename Rng>
CMatrix<Real> haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw Error(ErrorKind::OutOfRange, "haar_unitary needs dim >= 1");
  const CMatrix<Real> g = ginibre<Real>(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix<Real>> qr(g);
  CMatrix<Real> q = qr.householderQ();
  const CMatrix<Real>& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Real mag = std::abs(r(j, j));
    if (mag > Real(0)) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Uniformly random unit vector in the orthogonal complement of `psi`.
template <typename Real = double, typename Rng>
CVector<Real> random_orthogonal_state(const CVector<Real>& psi, Rng& rng) {
  require_normalized(psi);
  for (;;) {
    CVector<Real> g = ginibre<Real>(psi.size(), 1, rng);
    g -= psi * psi.dot(g);
    const Real n = g.norm();
    if (n > Real(1e-8)) {
      g /= n;
      // one re-orthogonalization pass
      g -= psi * psi.dot(g);
      return g / g.norm();
    }
  }
}

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
template <typename Real = double>
CVector<Real> bloch_state(Real theta, Real phi) {
  CVector<Real> s(2);
  s(0) = std::cos(theta / Real(2));
  s(1) = std::polar(std::sin(theta / Real(2)), phi);
  return s;
}

/// A post-selection drawn by rejection until |<post|pre>|^2 >= min_overlap.
template <typename Real>
struct PostSelectionDraw {
  CVector<Real> post;
  std::int64_t rejections = 0;
};

template <typename Real = double, typename Rng>
PostSelectionDraw<Real> sample_post_selection(const CVector<Real>& pre, Rng& rng,
                                              Real min_overlap,
                                              std::int64_t max_attempts = 1'000'000) {
  if (!(min_overlap > Real(0)) || min_overlap > Real(1)) {
    throw Error(ErrorKind::OutOfRange, "min_overlap must lie in (0, 1]");
  }
  PostSelectionDraw<Real> draw;
  for (std::int64_t attempt = 0; attempt < max_attempts; ++attempt) {
    CVector<Real> post = haar_state<Real>(static_cast<int>(pre.size()), rng);
    if (std::norm(post.dot(pre)) >= min_overlap) {
      draw.post = std::move(post);
      return draw;
    }
    ++draw.rejections;
  }
  throw Error(ErrorKind::OverlapTooSmall, "rejection sampling exhausted its attempt budget");
}

/// A Hermitian observable from the built-in catalog.
struct NamedOperator {
  std::string name;
  CMatrixd matrix;
};

/// Names accepted by `named_operator`.
///
/// pauli-x, pauli-y, pauli-z (dim 2 only), and the Hermitian parts of the
/// generalized clock Z|k> = w^k|k> and shift X|k> = |k+1 mod d> unitaries:
/// clock-re = (Z + Z^dagger)/2, clock-im = (Z - Z^dagger)/(2i), and likewise
/// shift-re, shift-im.
const std::vector<std::string>& operator_names();

/// Throws Error(InvalidArgument) for unknown names, Error(OutOfRange) for a
/// dimension the operator does not support.
NamedOperator named_operator(std::string_view name, int dim);

CMatrixd pauli_x();
CMatrixd pauli_y();
CMatrixd pauli_z();

}  // namespace unc
