#pragma once

// Variance moments of an observable pair in a pure state, the catalog of
// sum and product uncertainty bounds, and residuals of the two variance
// equalities over a complete orthonormal basis.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "uncertainty/kernel.hpp"

namespace unc {

/// Relative slack allowed on an inequality before it counts as violated, and
/// the threshold under which it counts as saturated.
inline constexpr double kSaturationTol = 1e-9;

/// Below this |<AbarBbar>| the phase alpha is undefined and reported as 0.
inline constexpr double kPhaseFloor = 1e-14;

enum class RelationId {
  hr,            // Heisenberg-Robertson, product form
  schrodinger,   // Robertson-Schrodinger, product form
  mp_sum,        // Maccone-Pati sum relation with +-i
  mp_sum2,       // Maccone-Pati sum relation through |psi_perp_{A+B}>
  amended_hr,    // amended Heisenberg-Robertson, bounds Delta A Delta B
  schlike_sum,   // Schrodinger-like sum relation with phase alpha
  schlike_prod,  // Schrodinger-like product relation with phase alpha
  weak_sum,      // sum relation for weak operators A_w, B_w
};

inline constexpr std::array<RelationId, 7> kAllRelations = {
    RelationId::hr,         RelationId::schrodinger, RelationId::mp_sum,     RelationId::mp_sum2,
    RelationId::amended_hr, RelationId::schlike_sum, RelationId::schlike_prod};

inline constexpr std::string_view to_string(RelationId id) {
  switch (id) {
    case RelationId::hr: return "hr";
    case RelationId::schrodinger: return "schrodinger";
    case RelationId::mp_sum: return "mp_sum";
    case RelationId::mp_sum2: return "mp_sum2";
    case RelationId::amended_hr: return "amended_hr";
    case RelationId::schlike_sum: return "schlike_sum";
    case RelationId::schlike_prod: return "schlike_prod";
    case RelationId::weak_sum: return "weak_sum";
  }
  return "unknown";
}

template <typename Real>
struct MomentSet {
  Real mean_a{};
  Real mean_b{};
  Real var_a{};
  Real var_b{};
  Complex<Real> comm{};  // <[A,B]>, imaginary
  Real anticomm{};       // <{A,B}>
  Complex<Real> corr{};  // <psi|Abar Bbar|psi>

  Real covariance() const { return anticomm / Real(2) - mean_a * mean_b; }

  /// |corr - (covariance + comm/2)|, zero in exact arithmetic.
  Real consistency_defect() const {
    return std::abs(corr - (Complex<Real>(covariance()) + comm / Real(2)));
  }
};

/// One uncertainty inequality evaluated on one instance.
template <typename Real>
struct BoundSet {
  RelationId id{};
  Real bound{};
  Real target{};
  Real gap{};
  bool saturated = false;
  bool applicable = true;
  bool degenerate = false;

  Real scale() const { return std::max(Real(1), std::abs(target)); }
  bool violated(Real rel_tol = Real(kSaturationTol)) const {
    return applicable && gap < -rel_tol * scale();
  }
};

template <typename Real>
BoundSet<Real> make_bound(RelationId id, Real bound, Real target) {
  BoundSet<Real> b;
  b.id = id;
  b.bound = bound;
  b.target = target;
  b.gap = target - bound;
  b.saturated = b.gap <= Real(kSaturationTol) * b.scale();
  return b;
}

template <typename Real>
BoundSet<Real> not_applicable(RelationId id, Real target) {
  BoundSet<Real> b;
  b.id = id;
  b.target = target;
  b.gap = target;
  b.applicable = false;
  return b;
}

enum class EqualityId { sum_equality, product_equality };

inline constexpr std::string_view to_string(EqualityId id) {
  return id == EqualityId::sum_equality ? "sum_equality" : "product_equality";
}

template <typename Real>
struct EqualityResidual {
  EqualityId id{};
  Real lhs{};
  Real rhs{};
  Real residual{};
  std::vector<Real> basis_terms;

  /// Literal product form Delta A^2 Delta B^2 = numerator / (1 - S/2)^2,
  /// present only when its denominator is well conditioned.
  struct Literal {
    Real lhs{};
    Real rhs{};
    Real residual{};
    Real denominator{};
  };
  std::optional<Literal> literal;

  Real relative() const { return residual / std::max(Real(1), std::abs(lhs)); }
};

namespace detail {

template <typename Real>
void check_pair(const CMatrix<Real>& a, const CMatrix<Real>& b, const CVector<Real>& psi) {
  require_hermitian(a);
  require_hermitian(b);
  require_same_dim(a.rows(), b.rows());
  require_same_dim(a.rows(), psi.size());
  require_normalized(psi);
}

template <typename Real>
void check_basis(const CVector<Real>& psi, const ComplementBasis<Real>& basis) {
  require_same_dim(psi.size(), basis.dim());
  const Real leak = (basis.columns().adjoint() * psi).cwiseAbs().maxCoeff();
  if (leak > Real(kInputTol)) {
    throw Error(ErrorKind::NotAnchored,
                "max |<psi_perp_n|psi>| = " + std::to_string(double(leak)));
  }
}

template <typename Real>
Real clamp_variance(Real v) {
  return (v < Real(0) && v > -Real(kIdentityTol)) ? Real(0) : v;
}

/// |<psi|A/sa - e^{i alpha} B/sb|v_n>|^2 for every complement vector v_n.
template <typename Real>
std::vector<Real> complement_terms(const CMatrix<Real>& a, const CMatrix<Real>& b,
                                   const CVector<Real>& psi, const ComplementBasis<Real>& basis,
                                   Real alpha, Real sa = Real(1), Real sb = Real(1)) {
  // <psi|M|v> = <M^dagger psi|v> with M^dagger = A/sa - e^{-i alpha} B/sb.
  const CVector<Real> w =
      (a * psi) / sa - std::polar(Real(1), -alpha) * (b * psi) / sb;
  const CVector<Real> overlaps = basis.columns().adjoint() * w;
  std::vector<Real> terms(static_cast<std::size_t>(overlaps.size()));
  for (Eigen::Index n = 0; n < overlaps.size(); ++n) terms[n] = std::norm(overlaps(n));
  return terms;
}

template <typename Real>
Real sum_of(const std::vector<Real>& xs, std::size_t count) {
  Real s = Real(0);
  for (std::size_t i = 0; i < count; ++i) s += xs[i];
  return s;
}

}  // namespace detail

template <typename Real>
MomentSet<Real> moments(const CMatrix<Real>& a, const CMatrix<Real>& b, const CVector<Real>& psi) {
  detail::check_pair(a, b, psi);
  const CVector<Real> a_psi = a * psi;
  const CVector<Real> b_psi = b * psi;

  MomentSet<Real> m;
  m.mean_a = psi.dot(a_psi).real();
  m.mean_b = psi.dot(b_psi).real();

  const CVector<Real> a_bar = a_psi - m.mean_a * psi;
  const CVector<Real> b_bar = b_psi - m.mean_b * psi;
  m.var_a = detail::clamp_variance(a_bar.squaredNorm());
  m.var_b = detail::clamp_variance(b_bar.squaredNorm());

  // <psi|AB|psi> = <A psi|B psi> for Hermitian A.
  const Complex<Real> ab = a_psi.dot(b_psi);
  const Complex<Real> ba = b_psi.dot(a_psi);
  m.comm = ab - ba;
  m.anticomm = (ab + ba).real();
  m.corr = a_bar.dot(b_bar);
  return m;
}

/// Argument of <Abar Bbar>: e^{-i alpha} <Abar Bbar> is real and nonnegative.
///
/// Equal modulo 2 pi to arctan(-i<[A,B]> / (<{A,B}> - 2<A><B>)), shifted by pi
/// when the denominator is negative. Returns 0 when |<Abar Bbar>| < 1e-14,
/// where every phase satisfies the sum equality.
template <typename Real>
Real alpha_phase(const MomentSet<Real>& m) {
  if (std::abs(m.corr) < Real(kPhaseFloor)) return Real(0);
  return std::atan2(m.corr.imag(), m.corr.real());
}

/// |<[A,B]> + <{A,B}> - 2<A><B>|, the state-dependent first term of the
/// Schrodinger-like sum bound and of the sum equality.
template <typename Real>
Real first_term(const MomentSet<Real>& m) {
  return std::abs(m.comm + Complex<Real>(m.anticomm - Real(2) * m.mean_a * m.mean_b));
}

/// sqrt(|<[A,B]>|^2 + (<{A,B}> - 2<A><B>)^2); equals first_term since the
/// commutator part is imaginary and the covariance part real.
template <typename Real>
Real first_term_pythagorean(const MomentSet<Real>& m) {
  const Real cov = m.anticomm - Real(2) * m.mean_a * m.mean_b;
  return std::hypot(std::abs(m.comm), cov);
}

/// Sum bounds (mp_sum, mp_sum2, schlike_sum), each against Delta A^2 + Delta B^2.
template <typename Real>
std::array<BoundSet<Real>, 3> bound_sum_relations(const MomentSet<Real>& m, const CMatrix<Real>& a,
                                                  const CMatrix<Real>& b, const CVector<Real>& psi,
                                                  const CVector<Real>& psi_perp) {
  detail::check_pair(a, b, psi);
  require_orthogonal(psi, psi_perp);
  const Real target = m.var_a + m.var_b;
  const CVector<Real> a_perp = a * psi_perp;
  const CVector<Real> b_perp = b * psi_perp;
  const Complex<Real> i_unit(0, 1);

  // Sign s in {+1,-1} with s*i*<[A,B]> >= 0.
  const Real s = (i_unit * m.comm).real() >= Real(0) ? Real(1) : Real(-1);
  const Real mp_first = (s * i_unit * m.comm).real();
  const Real mp_second = std::norm(psi.dot(a_perp + s * i_unit * b_perp));

  Real mp2 = Real(0);
  const CVector<Real> shifted = (a + b) * psi - (m.mean_a + m.mean_b) * psi;
  const Real shifted_norm = shifted.norm();
  if (shifted_norm >= Real(kIdentityTol)) {
    const CVector<Real> perp_ab = shifted / shifted_norm;
    mp2 = std::norm(perp_ab.dot((a + b) * psi)) / Real(2);
  }

  const Real alpha = alpha_phase(m);
  const Real sl_second = std::norm(psi.dot(a_perp - std::polar(Real(1), alpha) * b_perp));

  return {make_bound(RelationId::mp_sum, mp_first + mp_second, target),
          make_bound(RelationId::mp_sum2, mp2, target),
          make_bound(RelationId::schlike_sum, first_term(m) + sl_second, target)};
}

/// Below this the amended and Schrodinger-like product bounds are not applicable.
inline constexpr double kVarianceFloor = 1e-16;
/// Below this denominator magnitude the amended and Schrodinger-like product
/// bounds are reported as 0 with the degenerate flag.
inline constexpr double kDenominatorFloor = 1e-12;

/// Product bounds (hr, schrodinger, amended_hr, schlike_prod). amended_hr is
/// measured against Delta A Delta B, the others against Delta A^2 Delta B^2.
template <typename Real>
std::array<BoundSet<Real>, 4> bound_product_relations(const MomentSet<Real>& m,
                                                      const CMatrix<Real>& a,
                                                      const CMatrix<Real>& b,
                                                      const CVector<Real>& psi,
                                                      const CVector<Real>& psi_perp) {
  detail::check_pair(a, b, psi);
  require_orthogonal(psi, psi_perp);
  const Real product = m.var_a * m.var_b;
  const Real half_comm = std::norm(m.comm / Real(2));
  const Real schrodinger = half_comm + std::norm(Complex<Real>(m.covariance()));

  std::array<BoundSet<Real>, 4> out = {
      make_bound(RelationId::hr, half_comm, product),
      make_bound(RelationId::schrodinger, schrodinger, product),
      not_applicable(RelationId::amended_hr, std::sqrt(product)),
      not_applicable(RelationId::schlike_prod, product)};

  if (m.var_a <= Real(kVarianceFloor) || m.var_b <= Real(kVarianceFloor)) return out;

  const Real da = std::sqrt(m.var_a);
  const Real db = std::sqrt(m.var_b);
  const CVector<Real> a_perp = a * psi_perp / da;
  const CVector<Real> b_perp = b * psi_perp / db;
  const Complex<Real> i_unit(0, 1);

  const Real s = (i_unit * m.comm).real() >= Real(0) ? Real(1) : Real(-1);
  const Real amended_num = (s * i_unit * m.comm).real() / Real(2);
  const Real amended_den =
      Real(1) - std::norm(psi.dot(a_perp + s * i_unit * b_perp)) / Real(2);
  if (std::abs(amended_den) < Real(kDenominatorFloor)) {
    out[2] = make_bound(RelationId::amended_hr, Real(0), da * db);
    out[2].degenerate = true;
  } else {
    out[2] = make_bound(RelationId::amended_hr, amended_num / amended_den, da * db);
  }

  const Real alpha = alpha_phase(m);
  const Real sl_den =
      Real(1) - std::norm(psi.dot(a_perp - std::polar(Real(1), alpha) * b_perp)) / Real(2);
  if (std::abs(sl_den) < Real(kDenominatorFloor)) {
    out[3] = make_bound(RelationId::schlike_prod, Real(0), product);
    out[3].degenerate = true;
  } else {
    out[3] = make_bound(RelationId::schlike_prod, schrodinger / (sl_den * sl_den), product);
  }
  return out;
}

/// All seven bounds in the order of kAllRelations.
template <typename Real>
std::array<BoundSet<Real>, 7> all_bounds(const CMatrix<Real>& a, const CMatrix<Real>& b,
                                         const CVector<Real>& psi, const CVector<Real>& psi_perp) {
  const MomentSet<Real> m = moments(a, b, psi);
  const auto sums = bound_sum_relations(m, a, b, psi, psi_perp);
  const auto prods = bound_product_relations(m, a, b, psi, psi_perp);
  return {prods[0], prods[1], sums[0], sums[1], prods[2], sums[2], prods[3]};
}

/// Delta A^2 + Delta B^2 against
/// |<[A,B]> + <{A,B}> - 2<A><B>| + sum_n |<psi|A - e^{i alpha} B|psi_perp_n>|^2.
template <typename Real>
EqualityResidual<Real> sum_equality_residual(const CMatrix<Real>& a, const CMatrix<Real>& b,
                                             const CVector<Real>& psi,
                                             const ComplementBasis<Real>& basis) {
  const MomentSet<Real> m = moments(a, b, psi);
  detail::check_basis(psi, basis);
  EqualityResidual<Real> r;
  r.id = EqualityId::sum_equality;
  r.basis_terms = detail::complement_terms(a, b, psi, basis, alpha_phase(m));
  r.lhs = m.var_a + m.var_b;
  r.rhs = first_term(m) + detail::sum_of(r.basis_terms, r.basis_terms.size());
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

/// Below this Delta A Delta B the product equality is undefined.
inline constexpr double kProductFloor = 1e-12;
/// The literal product form is reconstructed only above this denominator.
inline constexpr double kLiteralDenominatorFloor = 1e-9;

/// The product equality in its division-free arrangement,
///   sum_n |<psi|A/DA - e^{i alpha} B/DB|psi_perp_n>|^2 = 2 - 2|<Abar Bbar>|/(DA DB),
/// plus the literal quotient form when 1 - S/2 exceeds 1e-9.
template <typename Real>
EqualityResidual<Real> product_equality_residual(const CMatrix<Real>& a, const CMatrix<Real>& b,
                                                 const CVector<Real>& psi,
                                                 const ComplementBasis<Real>& basis) {
  const MomentSet<Real> m = moments(a, b, psi);
  detail::check_basis(psi, basis);
  const Real da = std::sqrt(m.var_a);
  const Real db = std::sqrt(m.var_b);
  if (!(da * db > Real(kProductFloor))) {
    throw Error(ErrorKind::DegenerateVariance,
                "Delta A Delta B = " + std::to_string(double(da * db)));
  }
  EqualityResidual<Real> r;
  r.id = EqualityId::product_equality;
  r.basis_terms = detail::complement_terms(a, b, psi, basis, alpha_phase(m), da, db);
  const Real total = detail::sum_of(r.basis_terms, r.basis_terms.size());
  const Real half_first = std::abs(m.comm / Real(2) + Complex<Real>(m.covariance()));
  r.lhs = total;
  r.rhs = Real(2) - Real(2) * half_first / (da * db);
  r.residual = std::abs(r.lhs - r.rhs);

  const Real denominator = Real(1) - total / Real(2);
  if (denominator > Real(kLiteralDenominatorFloor)) {
    typename EqualityResidual<Real>::Literal lit;
    lit.denominator = denominator;
    lit.lhs = m.var_a * m.var_b;
    lit.rhs = (std::norm(m.comm / Real(2)) + std::norm(Complex<Real>(m.covariance()))) /
              (denominator * denominator);
    lit.residual = std::abs(lit.lhs - lit.rhs);
    r.literal = lit;
  }
  return r;
}

/// Sum bound keeping only the first `m` complement terms; m = 0 leaves the
/// first term alone and m = d-1 reproduces the right side of the sum equality.
template <typename Real>
Real partial_sum_bound(const CMatrix<Real>& a, const CMatrix<Real>& b, const CVector<Real>& psi,
                       const ComplementBasis<Real>& basis, Eigen::Index m) {
  if (m < 0 || m > psi.size() - 1) {
    throw Error(ErrorKind::OutOfRange, "partial sum order " + std::to_string(m));
  }
  const MomentSet<Real> mom = moments(a, b, psi);
  detail::check_basis(psi, basis);
  const auto terms = detail::complement_terms(a, b, psi, basis, alpha_phase(mom));
  return first_term(mom) + detail::sum_of(terms, static_cast<std::size_t>(m));
}

/// Every rung of the ladder, index m = 0..d-1.
template <typename Real>
std::vector<Real> partial_sum_ladder(const CMatrix<Real>& a, const CMatrix<Real>& b,
                                     const CVector<Real>& psi,
                                     const ComplementBasis<Real>& basis) {
  const MomentSet<Real> mom = moments(a, b, psi);
  detail::check_basis(psi, basis);
  const auto terms = detail::complement_terms(a, b, psi, basis, alpha_phase(mom));
  std::vector<Real> ladder{first_term(mom)};
  for (Real t : terms) ladder.push_back(ladder.back() + t);
  return ladder;
}

/// |<phi|Pi|phi> - sum_n basis_terms| with |phi> = (Abar - e^{-i alpha} Bbar)|psi>
/// and Pi = I - |psi><psi| built as a dense matrix.
template <typename Real>
Real proof_oracle_sum(const CMatrix<Real>& a, const CMatrix<Real>& b, const CVector<Real>& psi,
                      const ComplementBasis<Real>& basis) {
  const MomentSet<Real> m = moments(a, b, psi);
  detail::check_basis(psi, basis);
  const Eigen::Index d = psi.size();
  const CMatrix<Real> id = CMatrix<Real>::Identity(d, d);
  const CMatrix<Real> a_bar = a - m.mean_a * id;
  const CMatrix<Real> b_bar = b - m.mean_b * id;
  const Real alpha = alpha_phase(m);
  const CVector<Real> phi = (a_bar - std::polar(Real(1), -alpha) * b_bar) * psi;
  const CMatrix<Real> pi = projector_complement(psi);
  const Real projected = phi.dot(pi * phi).real();
  const auto terms = detail::complement_terms(a, b, psi, basis, alpha);
  return std::abs(projected - detail::sum_of(terms, terms.size()));
}

}  // namespace unc
