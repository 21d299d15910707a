#include "uncertainty/demo.hpp"

#include <charconv>
#include <cmath>
#include <locale>
#include <numbers>
#include <sstream>

#include "uncertainty/ensembles.hpp"
#include "uncertainty/io.hpp"
#include "uncertainty/relations.hpp"
#include "uncertainty/weak.hpp"

namespace unc {

namespace {

// 12 significant digits; the worked values are exact to well beyond that.
std::string num(double x) {
  if (std::abs(x) < 1e-14) x = 0.0;
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string num(Complexd z) {
  return "(" + num(z.real()) + ", " + num(z.imag()) + ")";
}

std::string pauli_equalities() {
  const CMatrixd a = pauli_x();
  const CMatrixd b = pauli_y();
  CVectord psi(2);
  psi << 1.0, 0.0;
  const auto basis = complement_basis(psi);
  const auto m = moments(a, b, psi);
  const auto sum_eq = sum_equality_residual(a, b, psi, basis);
  const auto prod_eq = product_equality_residual(a, b, psi, basis);

  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "A = sigma_x, B = sigma_y, |psi> = |0>, |psi_perp_1> = |1> (up to phase)\n"
      << "  <A>                      = " << num(m.mean_a) << "\n"
      << "  <B>                      = " << num(m.mean_b) << "\n"
      << "  DA^2                     = " << num(m.var_a) << "\n"
      << "  DB^2                     = " << num(m.var_b) << "\n"
      << "  <[A,B]>                  = " << num(m.comm) << "\n"
      << "  <{A,B}>                  = " << num(m.anticomm) << "\n"
      << "  <AbarBbar>               = " << num(m.corr) << "\n"
      << "  alpha                    = " << num(alpha_phase(m)) << "\n"
      << "sum equality\n"
      << "  DA^2 + DB^2              = " << num(sum_eq.lhs) << "\n"
      << "  |<[A,B]> + <{A,B}> - 2<A><B>| = " << num(first_term(m)) << "\n"
      << "  sum_n |<psi|A - e^{i alpha} B|psi_perp_n>|^2 = "
      << num(sum_eq.rhs - first_term(m)) << "\n"
      << "  residual                 = " << num(sum_eq.residual) << "\n"
      << "product equality (rearranged)\n"
      << "  sum_n |<psi|A/DA - e^{i alpha} B/DB|psi_perp_n>|^2 = " << num(prod_eq.lhs) << "\n"
      << "  2 - 2|<AbarBbar>|/(DA DB) = " << num(prod_eq.rhs) << "\n"
      << "  residual                 = " << num(prod_eq.residual) << "\n";
  if (prod_eq.literal) {
    out << "  DA^2 DB^2                = " << num(prod_eq.literal->lhs) << "\n"
        << "  quotient form            = " << num(prod_eq.literal->rhs) << "\n";
  }
  return out.str();
}

std::string pauli_weak() {
  const CMatrixd a = pauli_x();
  const CMatrixd b = pauli_y();
  CVectord pre(2);
  pre << 1.0, 0.0;
  const CVectord post = bloch_state(std::numbers::pi / 2, 0.0);
  const PpsEnsemble<double> ens(pre, post);
  CVectord perp(2);
  perp << 0.0, 1.0;
  const auto wm = weak_moments(a, b, ens);
  const auto ids = cd_identities(a, b, ens);
  const auto check = weak_relation_check(a, b, ens, perp);

  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "A = sigma_x, B = sigma_y, |psi> = |0>, |phi> = (|0> + |1>)/sqrt(2), |psi_perp> = |1>\n"
      << "  p = |<phi|psi>|^2        = " << num(ens.overlap_p()) << "\n"
      << "  <A>_w                    = " << num(weak_value(a, ens)) << "\n"
      << "  <B>_w                    = " << num(weak_value(b, ens)) << "\n"
      << "  <A_w>                    = " << num(wm.wv_a) << "\n"
      << "  <B_w>                    = " << num(wm.wv_b) << "\n"
      << "  DA_w^2                   = " << num(wm.var_wa) << "\n"
      << "  DB_w^2                   = " << num(wm.var_wb) << "\n"
      << "  <CD^dagger>              = " << num(ids.cd) << "\n"
      << "  alpha                    = " << num(weak_alpha(wm)) << "\n"
      << "  2|<CD^dagger>|           = " << num(ids.mod_lhs) << "\n"
      << "  |<phi|[A,B]|phi>/p + <phi|{A,B}|phi>/p - 2<A_w><B_w>*| = " << num(ids.mod_rhs) << "\n"
      << "weak sum relation\n"
      << "  DA_w^2 + DB_w^2          = " << num(check.target) << "\n"
      << "  bound                    = " << num(check.bound) << "\n"
      << "  gap                      = " << num(check.gap) << "\n"
      << "  saturated                = " << (check.saturated ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = {"pauli-equalities", "pauli-weak"};
  return names;
}

std::string run_demo(std::string_view name) {
  if (name == "pauli-equalities") return pauli_equalities();
  if (name == "pauli-weak") return pauli_weak();
  std::string available;
  for (const auto& n : demo_names()) available += (available.empty() ? "" : ", ") + n;
  throw Error(ErrorKind::InvalidArgument,
              "unknown demo '" + std::string(name) + "'; available: " + available);
}

}  // namespace unc
