#pragma once

#include <utility>
#include <vector>

// Explicit lower bound on inf E along the chain: Teller constant A, Sobolev
// step, cutoff-radius selection, and the final constant C(A) with
// inf E >= -N - C(A).

namespace rtfw::stability {

/// Sharp three-dimensional Sobolev constant in |grad u|_2^2 >= c_s |u|_6^2.
double sobolev_constant();

/// A = e_tf * sum Z_k^{7/3}; returns {A, e_tf}. Z_k >= 0 required.
std::pair<double, double> teller_constant(const std::vector<double>& Z_list);

struct BetaSelection {
  double beta_star = 0;
  double R_beta_star = 0;      // may overflow to +inf for very large A
  double arsinh_R = 0;         // always finite
  double matching_value = 0;   // min(lambda c_s/(8 pi^2), 1/pi^2)
  double residual = 0;         // relative defect of the selection equation
  bool degenerate = false;     // A == 0
};

/// Picks beta so that min(lambda c_s/(8 pi^2), 1/pi^2)
///   = sqrt(3A / (5 sqrt(2 arsinh(R_beta)^3))).
/// Solved in closed form for u = arsinh(R_beta); beta recovered from the
/// stationarity condition of F_beta.
BetaSelection select_beta(double lambda, double A);

struct StabilityReport {
  double A = 0;
  double e_tf = 0;
  double c_s = 0;
  double lambda = 0;
  double alpha_s = 0;
  double N = 0;
  double beta_star = 0;
  double R_beta_star = 0;
  double arsinh_R = 0;
  double C_of_A = 0;           // +inf when beyond double range
  double log10_C_of_A = 0;     // always finite for A > 0
  double lower_bound = 0;      // -N - C(A)
  double corollary_C = 0;      // C at A = e_tf Z_inf^{7/3} K
  double corollary_bound = 0;
  // first-case coefficients of the T and W^{1/3} terms after subtracting the
  // attraction bound; both must be >= 0 (enforced by the beta selection for
  // alpha_s <= 1/2)
  double case1_T_coeff = 0;
  double case1_W_coeff = 0;
};

struct StabilityInputs {
  double lambda = 1.0;
  double alpha_s = 1.0 / 137.035999084;
  std::vector<double> Z_list;
  double Z_inf = 0;
  int K = 1;
  double N = 0;
};

/// C(A) alone (second-case constant), +inf if out of double range.
double C_of_A(double lambda, double alpha_s, double A);
double log10_C_of_A(double lambda, double alpha_s, double A);

StabilityReport stability_constant(const StabilityInputs& in);

}  // namespace rtfw::stability
