#include "rtfw/cutoff_radii.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

namespace rtfw::cutoff {

namespace {

void require_pos(double x, const char* who) {
  if (!(x > 0) || !std::isfinite(x))
    throw std::domain_error(std::string(who) + ": argument must be finite and > 0");
}

}  // namespace

double F_beta(double r, double beta) {
  require_pos(r, "F_beta");
  require_pos(beta, "F_beta");
  const double a = std::asinh(r);
  return 1.0 / (r * a * a * a) + r / beta;
}

double F_beta_prime(double r, double beta) {
  require_pos(r, "F_beta_prime");
  require_pos(beta, "F_beta_prime");
  const double a = std::asinh(r);
  const double a3 = a * a * a;
  return -1.0 / (r * r * a3) - 3.0 / (r * a3 * a * std::sqrt(1.0 + r * r)) + 1.0 / beta;
}

double beta_of_R(double r) {
  require_pos(r, "beta_of_R");
  const double a = std::asinh(r);
  const double a3 = a * a * a;
  return 1.0 / (1.0 / (r * r * a3) + 3.0 / (r * a3 * a * std::sqrt(1.0 + r * r)));
}

CutoffResult R_of_beta(double beta) {
  require_pos(beta, "R_of_beta");
  // F_beta' is strictly increasing from -inf to 1/beta; bracket the root.
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (F_beta_prime(lo, beta) > 0) {
    lo *= 0.25;
    if (++guard > 600) throw std::runtime_error("R_of_beta: bracket failure (low)");
  }
  guard = 0;
  while (F_beta_prime(hi, beta) < 0) {
    hi *= 4.0;
    if (++guard > 600) throw std::runtime_error("R_of_beta: bracket failure (high)");
  }
  std::uintmax_t max_iter = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      [beta](double r) { return F_beta_prime(r, beta); }, lo, hi,
      boost::math::tools::eps_tolerance<double>(52), max_iter);
  const double r = 0.5 * (a + b);
  return {beta, beta, r, F_beta(r, beta), "root"};
}

double F_tilde_with_R(double r, double alpha, double R_beta) {
  require_pos(r, "F_tilde");
  require_pos(alpha, "F_tilde");
  require_pos(R_beta, "F_tilde");
  const double aR = std::asinh(R_beta);
  if (r >= R_beta) return 1.0 / (r * aR * aR * aR) + r / alpha;
  const double c = (R_beta / aR) * (R_beta / aR) * (R_beta / aR);
  return c / (r * r * r * r) + r / alpha;
}

double F_tilde(double r, double alpha, double beta) {
  return F_tilde_with_R(r, alpha, R_of_beta(beta).r_min);
}

CutoffResult R_tilde(double alpha, double beta) {
  require_pos(alpha, "R_tilde");
  require_pos(beta, "R_tilde");
  const CutoffResult base = R_of_beta(beta);
  const double R = base.r_min;
  const double aR = std::asinh(R);
  const double aR3 = aR * aR * aR;

  CutoffResult res;
  res.beta = beta;
  res.alpha = alpha;

  // Outer-branch root of F_tilde': r = sqrt(alpha / arsinh(R)^3).
  const double r_out = std::sqrt(alpha / aR3);
  if (r_out >= R) {
    res.r_min = r_out;
    res.branch = "outer";
  } else {
    // Inner-branch root: r = (4 alpha (R/arsinh R)^3)^{1/5}.
    const double r_in = std::pow(4.0 * alpha * (R / aR) * (R / aR) * (R / aR), 0.2);
    if (r_in <= R) {
      res.r_min = r_in;
      res.branch = "inner";
    } else {
      // Both roots on the wrong side: the minimizer is the kink itself.
      res.r_min = R;
      res.branch = "kink";
    }
  }
  res.value = F_tilde(res.r_min, alpha, beta);

  // Branch consistency: the returned point must carry a derivative sign
  // change. A violation signals an implementation bug, not bad input.
  const double eps = 1e-5 * res.r_min;
  const double tol = 1e-13 * res.value;
  const double left = F_tilde_with_R(res.r_min - eps, alpha, R);
  const double right = F_tilde_with_R(res.r_min + eps, alpha, R);
  if (!(left >= res.value - tol && right >= res.value - tol))
    throw std::logic_error("R_tilde: branch inconsistency");
  return res;
}

}  // namespace rtfw::cutoff
