#pragma once

// Dense complex linear algebra on small Hilbert spaces: vector and matrix
// aliases over Eigen, inner products, Hermiticity checks, and completion of a
// pure state to an orthonormal basis.

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "uncertainty/errors.hpp"

namespace unc {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using CVectord = CVector<double>;
using CMatrixd = CMatrix<double>;
using Complexd = Complex<double>;

/// Tolerance for validating caller-supplied states and operators.
inline constexpr double kInputTol = 1e-10;
/// Tolerance for algebraic identities that hold to roundoff.
inline constexpr double kIdentityTol = 1e-12;

namespace detail {

inline std::string dims(Eigen::Index a, Eigen::Index b) {
  return std::to_string(a) + " vs " + std::to_string(b);
}

}  // namespace detail

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Hermitian inner product <u|v>, conjugate-linear in `u`.
template <typename DerivedU, typename DerivedV>
auto inner(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch, detail::dims(u.size(), v.size()));
  }
  return u.dot(v);
}

/// Largest entrywise modulus of M - M^dagger.
template <typename Derived>
auto hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (m.rows() != m.cols()) return std::numeric_limits<Real>::infinity();
  if (m.size() == 0) return Real(0);
  return Real((m - m.adjoint()).cwiseAbs().maxCoeff());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  typename Eigen::NumTraits<typename Derived::Scalar>::Real tol) {
  if (tol < 0) throw Error(ErrorKind::InvalidArgument, "negative tolerance");
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

template <typename Real>
void require_normalized(const CVector<Real>& psi, Real tol = Real(kInputTol)) {
  if (!psi.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite state entries");
  const Real deviation = std::abs(psi.norm() - Real(1));
  if (deviation > tol) {
    throw Error(ErrorKind::NotNormalized, "|norm - 1| = " + std::to_string(double(deviation)));
  }
}

template <typename Real>
void require_hermitian(const CMatrix<Real>& m, Real tol = Real(kInputTol)) {
  if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite operator entries");
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "operator is not square");
  }
  if (hermiticity_defect(m) > tol) throw Error(ErrorKind::NotHermitian, "");
}

inline void require_same_dim(Eigen::Index expected, Eigen::Index got) {
  if (expected != got) throw Error(ErrorKind::DimensionMismatch, detail::dims(expected, got));
}

/// Unit vector orthogonal to an anchor state, within `tol`.
template <typename Real>
void require_orthogonal(const CVector<Real>& anchor, const CVector<Real>& v,
                        Real tol = Real(kInputTol)) {
  require_same_dim(anchor.size(), v.size());
  require_normalized(v, tol);
  if (std::abs(inner(anchor, v)) > tol) {
    throw Error(ErrorKind::NotOrthogonal, "|<psi|psi_perp>| = " +
                                              std::to_string(double(std::abs(inner(anchor, v)))));
  }
}

/// Pi = I - |psi><psi|.
template <typename Real>
CMatrix<Real> projector_complement(const CVector<Real>& psi, Real tol = Real(kInputTol)) {
  require_normalized(psi, tol);
  const Eigen::Index d = psi.size();
  return CMatrix<Real>::Identity(d, d) - psi * psi.adjoint();
}

template <typename Real>
class ComplementBasis;

template <typename Real>
ComplementBasis<Real> complement_basis(const CVector<Real>& psi, Real tol = Real(kInputTol));

/// The d-1 orthonormal vectors completing a pure state to a basis of C^d.
///
/// Vectors are stored as the columns of a d x (d-1) matrix. Instances are
/// produced by `complement_basis` or validated through `from_columns`.
template <typename Real>
class ComplementBasis {
 public:
  /// Validates the basis invariants (unit norm, mutual orthogonality including
  /// the anchor, and completeness) at `tol`.
  static ComplementBasis from_columns(CVector<Real> anchor, CMatrix<Real> columns,
                                      Real tol = Real(kIdentityTol)) {
    const Eigen::Index d = anchor.size();
    if (d < 1 || columns.rows() != d || columns.cols() != d - 1) {
      throw Error(ErrorKind::DimensionMismatch, "complement basis must be d x (d-1)");
    }
    if (!columns.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite basis entries");
    CMatrix<Real> full(d, d);
    full.col(0) = anchor;
    full.rightCols(d - 1) = columns;
    const CMatrix<Real> gram = full.adjoint() * full;
    const Real gram_defect = (gram - CMatrix<Real>::Identity(d, d)).cwiseAbs().maxCoeff();
    if (gram_defect > tol) {
      throw Error(ErrorKind::NotOrthogonal,
                  "basis Gram defect " + std::to_string(double(gram_defect)));
    }
    const CMatrix<Real> reconstruction = columns * columns.adjoint();
    const CMatrix<Real> projector = CMatrix<Real>::Identity(d, d) - anchor * anchor.adjoint();
    if ((reconstruction - projector).cwiseAbs().maxCoeff() > tol) {
      throw Error(ErrorKind::NotOrthogonal, "basis does not resolve I - |psi><psi|");
    }
    return ComplementBasis(std::move(anchor), std::move(columns));
  }

  const CVector<Real>& anchor() const noexcept { return anchor_; }
  const CMatrix<Real>& columns() const noexcept { return columns_; }
  Eigen::Index dim() const noexcept { return anchor_.size(); }
  Eigen::Index size() const noexcept { return columns_.cols(); }
  CVector<Real> vector(Eigen::Index n) const { return columns_.col(n); }

  /// Same complement, vectors mixed by a (d-1) x (d-1) unitary.
  ComplementBasis remixed(const CMatrix<Real>& unitary, Real tol = Real(1e-11)) const {
    if (unitary.rows() != size() || unitary.cols() != size()) {
      throw Error(ErrorKind::DimensionMismatch, "remixing unitary must be (d-1) x (d-1)");
    }
    return from_columns(anchor_, columns_ * unitary, tol);
  }

 private:
  template <typename R>
  friend ComplementBasis<R> complement_basis(const CVector<R>& psi, R tol);

  ComplementBasis(CVector<Real> anchor, CMatrix<Real> columns)
      : anchor_(std::move(anchor)), columns_(std::move(columns)) {}

  CVector<Real> anchor_;
  CMatrix<Real> columns_;
};

/// Completes `psi` to an orthonormal basis with one Householder reflector.
///
/// With w = psi_0/|psi_0| (or 1 when psi_0 = 0) and v = psi + w e_0, the
/// reflector H = I - 2 v v^dagger / |v|^2 sends e_0 to -psi/w. Its remaining
/// columns are the complement. |v|^2 = 2 + 2|psi_0| >= 2, so there is no
/// cancellation. Output is a deterministic function of the bits of `psi`.
template <typename Real>
ComplementBasis<Real> complement_basis(const CVector<Real>& psi, Real tol) {
  require_normalized(psi, tol);
  const Eigen::Index d = psi.size();
  if (d < 2) throw Error(ErrorKind::OutOfRange, "complement basis needs dim >= 2");

  const Real lead = std::abs(psi(0));
  const Complex<Real> phase = lead > Real(0) ? psi(0) / lead : Complex<Real>(1);
  CVector<Real> v = psi;
  v(0) += phase;
  const Real scale = Real(2) / v.squaredNorm();

  // Columns 1..d-1 of H: e_k - scale * v * conj(v_k).
  CMatrix<Real> columns = -scale * v * v.tail(d - 1).adjoint();
  for (Eigen::Index k = 1; k < d; ++k) columns(k, k - 1) += Real(1);
  return ComplementBasis<Real>(psi, std::move(columns));
}

}  // namespace unc
