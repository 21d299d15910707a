#pragma once

// Qubit sweep of the weak-measurement sum relation over post-selections on the
// Bloch sphere.

#include <string>
#include <string_view>
#include <vector>

#include "uncertainty/kernel.hpp"

namespace unc {

struct SweepConfig {
  std::string a_name = "pauli-x";
  std::string b_name = "pauli-y";
  CMatrixd a;
  CMatrixd b;
  std::string pre_spec = "0";
  CVectord pre;
  int theta_steps = 181;  // theta_i = pi * i / (theta_steps - 1)
  int phi_steps = 181;    // phi_j = 2 pi * j / phi_steps
  double min_overlap = 1e-3;
  double tol_gap = 1e-8;

  /// Throws Error when the operators or state are not qubit-sized, not
  /// Hermitian or not normalized, or when the grid is empty.
  void validate() const;
};

struct SweepRow {
  double theta = 0.0;
  double phi = 0.0;
  double p = 0.0;
  double lhs = 0.0;  // Delta A_w^2 + Delta B_w^2
  double rhs = 0.0;  // bound
  double gap = 0.0;
  double wv_a_re = 0.0;
  double wv_a_im = 0.0;
  bool rejected = false;
};

struct SweepGrid {
  SweepConfig config;
  std::vector<SweepRow> rows;

  std::size_t rejected_count() const;
  /// Accepted rows whose gap falls below -tol_gap * max(1, lhs).
  std::size_t violation_count() const;
};

/// Parses a named qubit state: 0, 1, +, -, +i, -i, or bloch:THETA,PHI.
CVectord parse_state_spec(std::string_view spec);

SweepGrid run_sweep(const SweepConfig& config);

/// Columns theta,phi,p,lhs,rhs,gap,wv_a_re,wv_a_im,rejected. Rejected rows
/// leave lhs..wv_a_im empty.
std::string sweep_to_csv(const SweepGrid& grid);
std::string sweep_to_json(const SweepGrid& grid);

}  // namespace unc
