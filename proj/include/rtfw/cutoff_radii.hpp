#pragma once

#include <string>

// Convex one-dimensional cutoff objectives and their minimizers R_beta and
// R_tilde(alpha, beta). Both objectives are strictly convex, diverge at 0 and
// infinity, and have unique minimizers; R_tilde has a derivative jump at
// r = R_beta, so its minimizer can sit exactly on the kink.

namespace rtfw::cutoff {

struct CutoffResult {
  double beta = 0;
  double alpha = 0;   // equals beta for the plain R case
  double r_min = 0;   // the minimizer
  double value = 0;   // objective at the minimizer
  std::string branch; // "outer", "inner", or "kink" (R_tilde only; "root" for R)
};

/// F_beta(r) = 1/(r arsinh(r)^3) + r/beta, for r, beta > 0.
double F_beta(double r, double beta);

/// dF_beta/dr.
double F_beta_prime(double r, double beta);

/// The beta for which a given r is the minimizer of F_beta (closed form from
/// F_beta'(r) = 0). Monotone increasing in r.
double beta_of_R(double r);

/// Unique minimizer of F_beta by bracketed root find on F_beta'.
CutoffResult R_of_beta(double beta);

/// F_tilde(r; alpha, beta): outer branch 1/(r arsinh(R_beta)^3) + r/alpha for
/// r >= R_beta, inner branch (R_beta/arsinh R_beta)^3/r^4 + r/alpha below.
double F_tilde(double r, double alpha, double beta);

/// Same, with R_beta already computed (avoids the root find per call).
double F_tilde_with_R(double r, double alpha, double R_beta);

/// Unique minimizer of F_tilde via the closed-form branch roots, with the
/// kink at R_beta covering the case where both roots fall on the wrong side.
CutoffResult R_tilde(double alpha, double beta);

}  // namespace rtfw::cutoff
