#pragma once

// Brute-force reference computations for the tests. Everything here goes
// through explicit dense matrices and textbook definitions, never through the
// library's vector shortcuts, so agreement is a real cross-check.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "uncertainty/kernel.hpp"

namespace oracle {

using unc::CMatrixd;
using unc::Complexd;
using unc::CVectord;

inline Complexd expect(const CMatrixd& x, const CVectord& psi) {
  const Complexd v = (psi.adjoint() * x * psi)(0, 0);
  return v;
}

/// <X^2> - <X>^2 by explicit matrix products.
inline double variance(const CMatrixd& x, const CVectord& psi) {
  return expect(x * x, psi).real() - std::pow(expect(x, psi).real(), 2);
}

inline Complexd commutator(const CMatrixd& a, const CMatrixd& b, const CVectord& psi) {
  return expect(a * b - b * a, psi);
}

inline Complexd anticommutator(const CMatrixd& a, const CMatrixd& b, const CVectord& psi) {
  return expect(a * b + b * a, psi);
}

/// The piecewise arctangent definition of the phase, returned in [0, 2 pi).
inline double piecewise_alpha(const CMatrixd& a, const CMatrixd& b, const CVectord& psi) {
  const Complexd i(0, 1);
  const double denom =
      anticommutator(a, b, psi).real() - 2.0 * expect(a, psi).real() * expect(b, psi).real();
  const double numer = (-i * commutator(a, b, psi)).real();
  double alpha = std::atan(numer / denom);
  if (denom < 0) alpha += std::numbers::pi;
  return std::fmod(alpha + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
}

inline double wrap(double angle) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(angle, two_pi);
  if (r < 0) r += two_pi;
  return r;
}

/// Complement basis by classical Gram-Schmidt against the standard basis.
inline CMatrixd gram_schmidt_complement(const CVectord& psi) {
  const auto d = psi.size();
  CMatrixd out(d, d - 1);
  std::vector<CVectord> accepted{psi};
  Eigen::Index col = 0;
  for (Eigen::Index k = 0; k < d && col < d - 1; ++k) {
    CVectord v = CVectord::Unit(d, k);
    for (const auto& u : accepted) v -= u * u.dot(v);
    for (const auto& u : accepted) v -= u * u.dot(v);
    if (v.norm() > 1e-6) {
      v /= v.norm();
      accepted.push_back(v);
      out.col(col++) = v;
    }
  }
  return out;
}

/// Variance of a general operator straight from its definition
/// <psi|(X - <X>)(X^dagger - <X^dagger>)|psi>.
inline double nonhermitian_variance(const CMatrixd& x, const CVectord& psi) {
  const auto d = psi.size();
  const CMatrixd id = CMatrixd::Identity(d, d);
  const Complexd mx = expect(x, psi);
  const CMatrixd xd = x.adjoint();
  const Complexd mxd = expect(xd, psi);
  return expect((x - mx * id) * (xd - mxd * id), psi).real();
}

/// |phi><phi| A / p.
inline CMatrixd weak_operator(const CMatrixd& a, const CVectord& pre, const CVectord& post) {
  const double p = std::norm(post.dot(pre));
  return post * post.adjoint() * a / p;
}

}  // namespace oracle
