#pragma once

#include <cstddef>
#include <vector>

namespace rtfw {

/// Logarithmic radial mesh with quadrature weights for integrals of
/// spherically symmetric fields over R^3.
///
/// Weights are exact for integrands that are linear in x = log r on each
/// interval; `w` carries the full 4*pi r^2 dr volume measure (plus the inner
/// ball [0, r_min] under a constant-integrand assumption) so that
/// sum(w) == (4/3) pi r_max^3 to machine precision. `w_over_r` plays the same
/// role for integrals of g(r)/|x|.
struct RadialGrid {
  std::vector<double> r;         // strictly increasing abscissae, size n
  std::vector<double> w;         // volume weights, size n
  std::vector<double> w_over_r;  // weights for the 1/r moment, size n
  std::vector<double> q_w;       // Weizsacker interval weights, size n-1:
                                 // int |grad chi|^2 dx ~ sum q_w (dchi/dr)^2 dr-form
  // per-interval cell weights used by the cumulative Hartree integrals
  std::vector<double> cellA, cellB;    // charge moment (r^2 dr), size n-1
  std::vector<double> cellA1, cellB1;  // potential moment (r dr), size n-1

  double r_min = 0, r_max = 0;

  static RadialGrid make_log(std::size_t n, double r_min, double r_max);

  std::size_t size() const { return r.size(); }
  double volume() const;

  /// Electrostatic potential of a spherically symmetric density sampled at
  /// the nodes: phi(r_i) = Q(r_i)/r_i + V(r_i) with the two cumulative
  /// integrals (inner charge, outer potential). O(n).
  std::vector<double> hartree_potential(const std::vector<double>& rho) const;

  /// Adjoint of the linear map rho -> hartree_potential(rho). O(n).
  std::vector<double> hartree_potential_adjoint(const std::vector<double>& y) const;

  /// Symmetrized Coulomb bilinear form D(a, b) = (1/2) iint a(x) b(y)/|x-y|.
  double coulomb_D(const std::vector<double>& a, const std::vector<double>& b) const;

  /// K y where D(a,b) = a^T K b; used in exact gradients/Hessians. O(n).
  std::vector<double> coulomb_K_apply(const std::vector<double>& y) const;
};

}  // namespace rtfw
