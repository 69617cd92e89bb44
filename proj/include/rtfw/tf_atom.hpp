#pragma once

#include <cstddef>

// Nonrelativistic Thomas-Fermi atom at unit coupling (gamma = 1, Z = 1),
// providing the constant e_tf with -e_tf = inf of the atomic TF functional
//   E[rho] = (3/10) int rho^{5/3} - Z int rho/|x| + D[rho].

namespace rtfw::stability {

struct TfAtomResult {
  double e_tf = 0;        // -minimum of the functional
  double kinetic = 0;
  double external = 0;    // attraction term (reported positive)
  double hartree = 0;
  double particle_number = 0;
  int iterations = 0;
  bool converged = false;
};

struct TfAtomOptions {
  std::size_t n = 20000;
  double r_min = 1e-10;
  double r_max = 80.0;
  double tol = 1e-13;  // scaled residual of the optimality system
  int max_iter = 200;
};

/// Grid minimizer of the TF functional: damped Newton on the optimality
/// system of the strictly convex functional (screened-potential form, the
/// Jacobian is tridiagonal). Includes analytic corrections for the
/// rho ~ r^{-3/2} cusp inside [0, r_min].
TfAtomResult tf_atom_minimize(const TfAtomOptions& opts = {});

struct TfShootingResult {
  double slope = 0;      // |y'(0)| of the dimensionless TF equation
  double e_tf = 0;       // (6/7) (4 pi)^{2/3} slope
  double j_integral = 0; // int x^{-1/2} y^{5/2} dx, equals (5/7) slope
};

/// Independent oracle: bisection shooting on y'' = y^{3/2}/sqrt(x).
TfShootingResult tf_shooting(double t_end = 22.0, double dt = 4e-5);

/// Cached e_tf from tf_atom_minimize with default options. Honors
/// RTFW_CACHE_DIR ("<dir>/e_tf.json").
double e_tf_cached();

}  // namespace rtfw::stability
