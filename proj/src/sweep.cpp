#include "uncertainty/sweep.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "uncertainty/ensembles.hpp"
#include "uncertainty/io.hpp"
#include "uncertainty/weak.hpp"

namespace unc {

namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorKind::InvalidArgument, "malformed number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

void SweepConfig::validate() const {
  if (a.rows() != 2 || b.rows() != 2 || pre.size() != 2) {
    throw Error(ErrorKind::OutOfRange, "sweeps support qubits (dim 2) only");
  }
  require_hermitian(a);
  require_hermitian(b);
  require_normalized(pre);
  if (theta_steps < 2 || phi_steps < 1) {
    throw Error(ErrorKind::OutOfRange, "grid needs theta_steps >= 2 and phi_steps >= 1");
  }
  if (!(min_overlap > 0.0) || min_overlap > 1.0) {
    throw Error(ErrorKind::OutOfRange, "min_overlap must lie in (0, 1]");
  }
}

CVectord parse_state_spec(std::string_view spec) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complexd i(0.0, 1.0);
  CVectord s(2);
  if (spec == "0") {
    s << 1.0, 0.0;
  } else if (spec == "1") {
    s << 0.0, 1.0;
  } else if (spec == "+") {
    s << r, r;
  } else if (spec == "-") {
    s << r, -r;
  } else if (spec == "+i") {
    s << r, i * r;
  } else if (spec == "-i") {
    s << r, -i * r;
  } else if (spec.starts_with("bloch:")) {
    const auto args = spec.substr(6);
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorKind::InvalidArgument, "expected bloch:THETA,PHI");
    }
    s = bloch_state(parse_number(args.substr(0, comma)), parse_number(args.substr(comma + 1)));
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown state spec '" + std::string(spec) + "'");
  }
  return s;
}

std::size_t SweepGrid::rejected_count() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.rejected ? 1 : 0;
  return n;
}

std::size_t SweepGrid::violation_count() const {
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (!r.rejected && r.gap < -config.tol_gap * std::max(1.0, r.lhs)) ++n;
  }
  return n;
}

SweepGrid run_sweep(const SweepConfig& config) {
  config.validate();
  SweepGrid grid;
  grid.config = config;
  grid.rows.reserve(static_cast<std::size_t>(config.theta_steps) * config.phi_steps);

  const CVectord perp = complement_basis(config.pre).vector(0);
  for (int ti = 0; ti < config.theta_steps; ++ti) {
    const double theta = std::numbers::pi * ti / (config.theta_steps - 1);
    for (int pj = 0; pj < config.phi_steps; ++pj) {
      const double phi = 2.0 * std::numbers::pi * pj / config.phi_steps;
      SweepRow row;
      row.theta = theta;
      row.phi = phi;
      const CVectord post = bloch_state(theta, phi);
      row.p = std::norm(post.dot(config.pre));
      if (row.p < config.min_overlap) {
        row.rejected = true;
        grid.rows.push_back(row);
        continue;
      }
      const PpsEnsemble<double> ens(config.pre, post);
      const auto check = weak_relation_check(config.a, config.b, ens, perp, config.min_overlap);
      const Complexd wv = weak_value(config.a, ens, config.min_overlap);
      row.lhs = check.target;
      row.rhs = check.bound;
      row.gap = check.gap;
      row.wv_a_re = wv.real();
      row.wv_a_im = wv.imag();
      grid.rows.push_back(row);
    }
  }
  return grid;
}

std::string sweep_to_csv(const SweepGrid& grid) {
  std::string out = "theta,phi,p,lhs,rhs,gap,wv_a_re,wv_a_im,rejected\n";
  for (const auto& r : grid.rows) {
    out += format_double(r.theta);
    out += ',';
    out += format_double(r.phi);
    out += ',';
    out += format_double(r.p);
    if (r.rejected) {
      out += ",,,,,,1\n";
      continue;
    }
    for (double x : {r.lhs, r.rhs, r.gap, r.wv_a_re, r.wv_a_im}) {
      out += ',';
      out += format_double(x);
    }
    out += ",0\n";
  }
  return out;
}

std::string sweep_to_json(const SweepGrid& grid) {
  using nlohmann::ordered_json;
  const auto& cfg = grid.config;
  ordered_json doc;
  doc["config"] = {{"a", cfg.a_name},
                   {"b", cfg.b_name},
                   {"pre", cfg.pre_spec},
                   {"theta_steps", cfg.theta_steps},
                   {"phi_steps", cfg.phi_steps},
                   {"min_overlap", cfg.min_overlap},
                   {"tol_gap", cfg.tol_gap}};
  ordered_json rows = ordered_json::array();
  for (const auto& r : grid.rows) {
    ordered_json row = {{"theta", r.theta}, {"phi", r.phi}, {"p", r.p}};
    if (r.rejected) {
      row["rejected"] = true;
    } else {
      row["lhs"] = r.lhs;
      row["rhs"] = r.rhs;
      row["gap"] = r.gap;
      row["wv_a_re"] = r.wv_a_re;
      row["wv_a_im"] = r.wv_a_im;
      row["rejected"] = false;
    }
    rows.push_back(row);
  }
  doc["rows"] = rows;
  doc["summary"] = {{"rows", grid.rows.size()},
                    {"rejected", grid.rejected_count()},
                    {"violations", grid.violation_count()}};
  return doc.dump(2) + "\n";
}

}  // namespace unc
