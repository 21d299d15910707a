#include "uncertainty/ensembles.hpp"

#include <numbers>

namespace unc {

void TrialConfig::validate() const {
  if (dims.empty()) throw Error(ErrorKind::OutOfRange, "at least one dimension is required");
  for (int d : dims) {
    if (d < 2) throw Error(ErrorKind::OutOfRange, "dim must be >= 2, got " + std::to_string(d));
  }
  if (trials < 1) throw Error(ErrorKind::OutOfRange, "trials must be >= 1");
  if (!(min_overlap > 0.0) || min_overlap > 1.0) {
    throw Error(ErrorKind::OutOfRange, "min_overlap must lie in (0, 1]");
  }
}

CMatrixd pauli_x() {
  CMatrixd m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrixd pauli_y() {
  const Complexd i(0.0, 1.0);
  CMatrixd m(2, 2);
  m << 0.0, -i, i, 0.0;
  return m;
}

CMatrixd pauli_z() {
  CMatrixd m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

namespace {

CMatrixd clock(int d) {
  CMatrixd z = CMatrixd::Zero(d, d);
  for (int k = 0; k < d; ++k) z(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * k / d);
  return z;
}

CMatrixd shift(int d) {
  CMatrixd x = CMatrixd::Zero(d, d);
  for (int k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
  return x;
}

CMatrixd real_part(const CMatrixd& u) { return (u + u.adjoint()) / 2.0; }

CMatrixd imag_part(const CMatrixd& u) { return (u - u.adjoint()) / Complexd(0.0, 2.0); }

}  // namespace

const std::vector<std::string>& operator_names() {
  static const std::vector<std::string> names = {"pauli-x",  "pauli-y",  "pauli-z",  "clock-re",
                                                 "clock-im", "shift-re", "shift-im"};
  return names;
}

NamedOperator named_operator(std::string_view name, int dim) {
  if (dim < 2) throw Error(ErrorKind::OutOfRange, "operators need dim >= 2");
  const bool pauli = name.starts_with("pauli-");
  if (pauli && dim != 2) {
    throw Error(ErrorKind::OutOfRange, std::string(name) + " is defined for dim 2 only");
  }
  NamedOperator op{std::string(name), {}};
  if (name == "pauli-x") {
    op.matrix = pauli_x();
  } else if (name == "pauli-y") {
    op.matrix = pauli_y();
  } else if (name == "pauli-z") {
    op.matrix = pauli_z();
  } else if (name == "clock-re") {
    op.matrix = real_part(clock(dim));
  } else if (name == "clock-im") {
    op.matrix = imag_part(clock(dim));
  } else if (name == "shift-re") {
    op.matrix = real_part(shift(dim));
  } else if (name == "shift-im") {
    op.matrix = imag_part(shift(dim));
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown operator '" + std::string(name) + "'");
  }
  return op;
}

}  // namespace unc
