#pragma once

// Weak values over pre- and post-selected ensembles, the non-Hermitian weak
// operators A_w = |phi><phi|A/p, their variances, and the sum uncertainty
// relation they obey, together with checks of its intermediate identities.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "uncertainty/kernel.hpp"
#include "uncertainty/relations.hpp"

namespace unc {

/// Default floor on the post-selection probability p.
inline constexpr double kMinOverlap = 1e-3;

/// Pre-selection |psi>, post-selection |phi>, and p = |<phi|psi>|^2.
template <typename Real>
class PpsEnsemble {
 public:
  PpsEnsemble(CVector<Real> pre, CVector<Real> post, Real tol = Real(kInputTol))
      : pre_(std::move(pre)), post_(std::move(post)) {
    require_same_dim(pre_.size(), post_.size());
    require_normalized(pre_, tol);
    require_normalized(post_, tol);
    amplitude_ = post_.dot(pre_);
    overlap_p_ = std::norm(amplitude_);
    if (!(overlap_p_ > Real(0))) {
      throw Error(ErrorKind::OverlapTooSmall, "orthogonal pre- and post-selection");
    }
  }

  const CVector<Real>& pre() const noexcept { return pre_; }
  const CVector<Real>& post() const noexcept { return post_; }
  Real overlap_p() const noexcept { return overlap_p_; }
  /// <phi|psi>
  Complex<Real> amplitude() const noexcept { return amplitude_; }
  Eigen::Index dim() const noexcept { return pre_.size(); }

  void require_overlap(Real min_overlap) const {
    if (overlap_p_ < min_overlap) {
      throw Error(ErrorKind::OverlapTooSmall, "p = " + std::to_string(double(overlap_p_)) +
                                                  " < " + std::to_string(double(min_overlap)));
    }
  }

 private:
  CVector<Real> pre_;
  CVector<Real> post_;
  Complex<Real> amplitude_{};
  Real overlap_p_{};
};

/// <phi|A|psi> / <phi|psi>.
template <typename Real>
Complex<Real> weak_value(const CMatrix<Real>& a, const PpsEnsemble<Real>& ens,
                         Real min_overlap = Real(kMinOverlap)) {
  require_hermitian(a);
  require_same_dim(a.rows(), ens.dim());
  ens.require_overlap(min_overlap);
  return ens.post().dot(a * ens.pre()) / ens.amplitude();
}

template <typename Real>
struct WeakOperator {
  CMatrix<Real> matrix;  // |phi><phi|A / p
  CMatrix<Real> source;  // A
};

template <typename Real>
WeakOperator<Real> weak_operator(const CMatrix<Real>& a, const PpsEnsemble<Real>& ens,
                                 Real min_overlap = Real(kMinOverlap)) {
  require_hermitian(a);
  require_same_dim(a.rows(), ens.dim());
  ens.require_overlap(min_overlap);
  const auto& phi = ens.post();
  // <phi|A as a row vector: (A^dagger phi)^dagger = (A phi)^dagger.
  return {phi * (a * phi).adjoint() / ens.overlap_p(), a};
}

/// <psi|X X^dagger|psi> - |<psi|X|psi>|^2, with negatives above -1e-12 clamped to 0.
template <typename Real>
Real nonhermitian_variance(const CMatrix<Real>& x, const CVector<Real>& psi) {
  require_same_dim(x.rows(), psi.size());
  require_same_dim(x.cols(), psi.size());
  const CVector<Real> xd_psi = x.adjoint() * psi;
  const Complex<Real> mean = psi.dot(x * psi);
  return detail::clamp_variance(xd_psi.squaredNorm() - std::norm(mean));
}

template <typename Real>
struct WeakMoments {
  Complex<Real> wv_a{};     // <A_w>
  Complex<Real> wv_b{};     // <B_w>
  Real var_wa{};            // Delta A_w^2
  Real var_wb{};            // Delta B_w^2
  Complex<Real> cd_corr{};  // <C D^dagger>, C = A_w - <A_w>, D = B_w - <B_w>
};

template <typename Real>
WeakMoments<Real> weak_moments(const WeakOperator<Real>& aw, const WeakOperator<Real>& bw,
                               const CVector<Real>& psi) {
  WeakMoments<Real> m;
  m.wv_a = psi.dot(aw.matrix * psi);
  m.wv_b = psi.dot(bw.matrix * psi);
  m.var_wa = nonhermitian_variance(aw.matrix, psi);
  m.var_wb = nonhermitian_variance(bw.matrix, psi);
  // <psi|C D^dagger|psi> = <C^dagger psi|D^dagger psi>
  const CVector<Real> cd_psi = aw.matrix.adjoint() * psi - std::conj(m.wv_a) * psi;
  const CVector<Real> dd_psi = bw.matrix.adjoint() * psi - std::conj(m.wv_b) * psi;
  m.cd_corr = cd_psi.dot(dd_psi);
  return m;
}

template <typename Real>
WeakMoments<Real> weak_moments(const CMatrix<Real>& a, const CMatrix<Real>& b,
                               const PpsEnsemble<Real>& ens,
                               Real min_overlap = Real(kMinOverlap)) {
  return weak_moments(weak_operator(a, ens, min_overlap), weak_operator(b, ens, min_overlap),
                      ens.pre());
}

/// Expectation-level identities for C = A_w - <A_w> and D = B_w - <B_w>.
template <typename Real>
struct CdIdentities {
  Complex<Real> cd{};  // <C D^dagger>
  Complex<Real> dc{};  // <D C^dagger>

  // <CD^dagger + DC^dagger> = <phi|{A,B}|phi>/p - <A_w><B_w>* - <A_w>*<B_w>
  Complex<Real> sym_lhs{}, sym_rhs{};
  // <CD^dagger - DC^dagger> = <phi|[A,B]|phi>/p - <A_w><B_w>* + <A_w>*<B_w>
  Complex<Real> anti_lhs{}, anti_rhs{};
  // 2|<CD^dagger>| = |<phi|[A,B]|phi>/p + <phi|{A,B}|phi>/p - 2<A_w><B_w>*|
  Real mod_lhs{}, mod_rhs{};

  Real sym_residual() const { return std::abs(sym_lhs - sym_rhs); }
  Real anti_residual() const { return std::abs(anti_lhs - anti_rhs); }
  Real mod_residual() const { return std::abs(mod_lhs - mod_rhs); }
  Real max_residual() const {
    return std::max({sym_residual(), anti_residual(), mod_residual()});
  }
};

template <typename Real>
CdIdentities<Real> cd_identities(const CMatrix<Real>& a, const CMatrix<Real>& b,
                                 const PpsEnsemble<Real>& ens,
                                 Real min_overlap = Real(kMinOverlap)) {
  const auto aw = weak_operator(a, ens, min_overlap);
  const auto bw = weak_operator(b, ens, min_overlap);
  const auto& psi = ens.pre();
  const Eigen::Index d = ens.dim();
  const CMatrix<Real> id = CMatrix<Real>::Identity(d, d);

  const Complex<Real> wa = psi.dot(aw.matrix * psi);
  const Complex<Real> wb = psi.dot(bw.matrix * psi);
  const CMatrix<Real> c = aw.matrix - wa * id;
  const CMatrix<Real> dm = bw.matrix - wb * id;

  CdIdentities<Real> r;
  r.cd = psi.dot(c * dm.adjoint() * psi);
  r.dc = psi.dot(dm * c.adjoint() * psi);

  const auto& phi = ens.post();
  const Real p = ens.overlap_p();
  const Complex<Real> phi_ab = phi.dot(a * (b * phi));
  const Complex<Real> phi_ba = phi.dot(b * (a * phi));
  const Complex<Real> anti = (phi_ab + phi_ba) / p;
  const Complex<Real> comm = (phi_ab - phi_ba) / p;

  r.sym_lhs = r.cd + r.dc;
  r.sym_rhs = anti - wa * std::conj(wb) - std::conj(wa) * wb;
  r.anti_lhs = r.cd - r.dc;
  r.anti_rhs = comm - wa * std::conj(wb) + std::conj(wa) * wb;
  r.mod_lhs = Real(2) * std::abs(r.cd);
  r.mod_rhs = std::abs(comm + anti - Real(2) * wa * std::conj(wb));
  return r;
}

/// Phase with e^{-i alpha}<C D^dagger> real and nonnegative; 0 when |<CD^dagger>| < 1e-14.
template <typename Real>
Real weak_alpha(const WeakMoments<Real>& m) {
  if (std::abs(m.cd_corr) < Real(kPhaseFloor)) return Real(0);
  return std::atan2(m.cd_corr.imag(), m.cd_corr.real());
}

/// The weak-measurement sum relation for one orthogonal |psi_perp>:
///   Delta A_w^2 + Delta B_w^2 >= |<phi|[A,B]|phi>/p + <phi|{A,B}|phi>/p - 2<A_w><B_w>*|
///                                 + |<psi|A_w - e^{i alpha} B_w|psi_perp>|^2.
template <typename Real>
BoundSet<Real> weak_relation_check(const CMatrix<Real>& a, const CMatrix<Real>& b,
                                   const PpsEnsemble<Real>& ens, const CVector<Real>& psi_perp,
                                   Real min_overlap = Real(kMinOverlap)) {
  const auto aw = weak_operator(a, ens, min_overlap);
  const auto bw = weak_operator(b, ens, min_overlap);
  const auto& psi = ens.pre();
  require_orthogonal(psi, psi_perp);
  const WeakMoments<Real> m = weak_moments(aw, bw, psi);

  const auto& phi = ens.post();
  const Real p = ens.overlap_p();
  const Complex<Real> phi_ab = phi.dot(a * (b * phi));
  const Complex<Real> phi_ba = phi.dot(b * (a * phi));
  const Real first = std::abs((phi_ab - phi_ba) / p + (phi_ab + phi_ba) / p -
                              Real(2) * m.wv_a * std::conj(m.wv_b));

  const Real alpha = weak_alpha(m);
  const CMatrix<Real> mixed = aw.matrix - std::polar(Real(1), alpha) * bw.matrix;
  const Real second = std::norm(psi.dot(mixed * psi_perp));

  return make_bound(RelationId::weak_sum, first + second, m.var_wa + m.var_wb);
}

/// Bookkeeping for the norm inequality
///   |C^dagger psi - e^{i tau} D^dagger psi + k(psi - psi_bar)|^2 >= 0
/// and its quadratic expansion in k.
template <typename Real>
struct WeakBoundTrace {
  Real norm2{};
  Real lambda{};   // 2(1 - Re<psi|psi_bar>)
  Real beta{};     // 2 Re<psi|(-C + e^{-i tau} D)|psi_bar>
  Real pi_term{};  // 2 Re[e^{i tau} <C D^dagger>]
  Real k{};
  Real variance_sum{};  // Delta A_w^2 + Delta B_w^2
  Real consistency_residual{};
  std::optional<Real> k_star;           // -beta / (2 lambda)
  std::optional<Real> bound_at_k_star;  // beta^2 / (4 lambda) + pi_term
  std::optional<bool> k_star_optimal;

  /// -lambda k^2 - beta k + pi_term
  Real expansion_at(Real kk) const { return -lambda * kk * kk - beta * kk + pi_term; }
};

/// Below this lambda the direction psi - psi_bar vanishes.
inline constexpr double kLambdaFloor = 1e-12;

template <typename Real>
WeakBoundTrace<Real> weak_bound_trace(const CMatrix<Real>& a, const CMatrix<Real>& b,
                                      const PpsEnsemble<Real>& ens, Real k, Real tau,
                                      const CVector<Real>& psi_bar,
                                      Real min_overlap = Real(kMinOverlap)) {
  const auto aw = weak_operator(a, ens, min_overlap);
  const auto bw = weak_operator(b, ens, min_overlap);
  const auto& psi = ens.pre();
  require_same_dim(psi.size(), psi_bar.size());
  require_normalized(psi_bar);
  const WeakMoments<Real> m = weak_moments(aw, bw, psi);

  const Eigen::Index d = ens.dim();
  const CMatrix<Real> id = CMatrix<Real>::Identity(d, d);
  const CMatrix<Real> c = aw.matrix - m.wv_a * id;
  const CMatrix<Real> dm = bw.matrix - m.wv_b * id;
  const Complex<Real> e_tau = std::polar(Real(1), tau);

  WeakBoundTrace<Real> t;
  t.k = k;
  t.lambda = Real(2) * (Real(1) - psi.dot(psi_bar).real());
  if (t.lambda < Real(kLambdaFloor) && k != Real(0)) {
    throw Error(ErrorKind::DegenerateVariance, "psi_bar coincides with psi while k != 0");
  }
  const CVector<Real> chi =
      c.adjoint() * psi - e_tau * (dm.adjoint() * psi) + k * (psi - psi_bar);
  t.norm2 = chi.squaredNorm();
  t.beta = Real(2) * psi.dot((-c + std::conj(e_tau) * dm) * psi_bar).real();
  t.pi_term = Real(2) * (e_tau * m.cd_corr).real();
  t.variance_sum = m.var_wa + m.var_wb;
  t.consistency_residual = std::abs(t.norm2 - (t.variance_sum - t.expansion_at(k)));

  if (t.lambda >= Real(kLambdaFloor)) {
    const Real ks = -t.beta / (Real(2) * t.lambda);
    t.k_star = ks;
    t.bound_at_k_star = t.beta * t.beta / (Real(4) * t.lambda) + t.pi_term;
    const Real peak = t.expansion_at(ks);
    const Real span = Real(10) * std::max(Real(1), std::abs(ks));
    bool optimal = true;
    for (int i = 0; i <= 200; ++i) {
      const Real kk = ks - span + span * Real(i) / Real(100);
      if (t.expansion_at(kk) > peak + Real(kIdentityTol) * std::max(Real(1), std::abs(peak))) {
        optimal = false;
      }
    }
    t.k_star_optimal = optimal;
  }
  return t;
}

/// cos(theta)|psi> + e^{i phase} sin(theta)|psi_perp>.
template <typename Real>
CVector<Real> tilted_state(const CVector<Real>& psi, const CVector<Real>& psi_perp, Real theta,
                           Real phase) {
  return std::cos(theta) * psi + std::polar(std::sin(theta), phase) * psi_perp;
}

/// theta -> 0 limit of the bound at k*, with psi_bar = tilted_state(psi, psi_perp, theta, phase):
///   Re[e^{i phase} <psi|(-A_w + e^{-i tau} B_w)|psi_perp>]^2 + 2 Re[e^{i tau} <C D^dagger>].
template <typename Real>
Real weak_limit_bound(const CMatrix<Real>& a, const CMatrix<Real>& b, const PpsEnsemble<Real>& ens,
                      Real tau, Real phase, const CVector<Real>& psi_perp,
                      Real min_overlap = Real(kMinOverlap)) {
  const auto aw = weak_operator(a, ens, min_overlap);
  const auto bw = weak_operator(b, ens, min_overlap);
  const auto& psi = ens.pre();
  require_orthogonal(psi, psi_perp);
  const WeakMoments<Real> m = weak_moments(aw, bw, psi);
  const Complex<Real> e_tau = std::polar(Real(1), tau);
  const Complex<Real> x =
      std::polar(Real(1), phase) * psi.dot((-aw.matrix + std::conj(e_tau) * bw.matrix) * psi_perp);
  return x.real() * x.real() + Real(2) * (e_tau * m.cd_corr).real();
}

}  // namespace unc
