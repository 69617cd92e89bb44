#pragma once

#include <span>
#include <string>
#include <vector>

// Scalar special functions of the relativistic TFW kinetic-energy density.
// All quantities are dimensionless: momenta in units of mc, energies in mc^2.

namespace rtfw::sf {

/// arsinh, kept as a named helper so formulas read like the math.
double arsinh(double x);

/// f(t)^2 = t/sqrt(t^2+1) + 2 t^2/(t^2+1) arsinh(t). Domain: t >= 0.
double f_squared(double t);

/// Weizsacker weight f(t) = sqrt(f_squared(t)); f(0) = 0, strictly increasing.
double f(double t);

/// df/dt for t > 0 (closed form via f' = A'/(2f) with A = f^2).
double f_prime(double t);

/// Relativistic TF kinetic energy density with rest mass subtracted:
/// t_tf(s) = s(s^2+1)^{3/2} + s^3(s^2+1)^{1/2} - arsinh(s) - (8/3)s^3.
/// Small-s branch (s < 0.1) uses the Taylor series to avoid cancellation.
double t_tf(double s);

/// d t_tf/ds = 8 s^2 (sqrt(s^2+1) - 1), evaluated cancellation-free.
double t_tf_prime(double s);

/// d^2 t_tf/ds^2.
double t_tf_second(double s);

/// F(t) = int_0^t f(s) ds by adaptive quadrature (abs+rel tol 1e-12).
/// This is the slow exact path; the cached table in ftable.hpp is the fast one.
double F_exact(double t);

/// Inverse of F by safeguarded Newton on the certified bracket
/// [y/f(t_hi), t_hi] with t_hi = 2 y^{2/3} (y+1)^{1/3}. Exact path.
double F_inverse_exact(double y);

/// H(s) = F(s) / (s f(s)), values in (0,1); H(0+) = 2/3, H(inf) = 1.
double H_exact(double s);

/// g(s) = -(F'(s)/s^2)' F'(s) / (F'(s)^2/s^2)^2, assembled from the closed
/// form of (F'/s^2)'. g(0+) = 3/2, g -> infinity as s -> infinity.
double g_fn(double s);

struct HAnalysisResult {
  double s_star = 0;  // minimizer of H
  double a = 0;       // inf H = H(s_star)
  double b = 0;       // sup H (the limit value 1; not attained)
  double scan_sup = 0;
};

/// Minimize H by coarse log-scan over [1e-8, 1e8] plus Brent refinement.
HAnalysisResult minimize_H();

struct GMinResult {
  double s_min = 0;
  double c_g = 0;  // min over s >= 0 of g
};

/// Bracketed scan + local refinement of min g. c_g > 0.
GMinResult min_g();

// Pointwise verification of the bounding inequalities on F, f, t_tf and of
// the phase-space sandwich. Margins are evaluated in algebraically stable
// forms so that a genuine failure is distinguishable from roundoff.
struct BoundsFailure {
  std::string inequality;
  double point = 0;
  double margin = 0;
};

struct BoundsReport {
  std::size_t points_checked = 0;
  std::size_t checks_run = 0;
  std::vector<BoundsFailure> failures;
  bool all_passed() const { return failures.empty(); }
};

/// Checks, at each sample point s > 0:
///   F(s)  > s sqrt(arsinh s)/2            (lower bound on F)
///   f(s)  > sqrt(arsinh s)                 (lower bound on f)
///   t_tf(s) > s^4 / (1 + 5/(4s))           (lower bound on t_tf)
///   s sqrt(arsinh s)/2 > s^{3/2}/(2 sqrt(1+s))
///   G(2 s^{2/3} (s+1)^{1/3}) > s           (upper bound on G^{-1})
/// plus monotonicity and concavity of sqrt(arsinh) across the sample.
BoundsReport appendix_bounds_report(std::span<const double> sample);

/// Phase-space sandwich 2p^4 >= t_tf(p) >= 2p^4 - (8/3)p^3, checked through
/// stable margin forms; also verifies t_tf itself against the stable
/// reconstruction at every point.
BoundsReport phase_space_sandwich_report(std::span<const double> sample);

/// Log-spaced sample grid, endpoints included.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace rtfw::sf
