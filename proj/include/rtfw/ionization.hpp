#pragma once

#include <array>
#include <optional>
#include <vector>

// Analytic maximal-ionization machinery: the H-analysis constant a, the bound
// coefficient 2/sqrt(a), and the multi-center weight kernel inequality.

namespace rtfw::ionization {

struct IonizationBoundReport {
  double a = 0;
  double b = 0;
  double s_star = 0;
  double bound_coefficient = 0;  // 2/sqrt(a)
  double Z = 0;
  double analytic_upper = 0;     // bound_coefficient * Z
  std::optional<double> solver_N_max;
};

/// Bound report for a single nucleus of charge Z; the H-analysis result is
/// computed once and cached.
IonizationBoundReport ionization_bound(double Z);

using Vec3 = std::array<double, 3>;

/// phi(x) = sum_k kappa_k / |x - R_k|; domain error at a nucleus.
double weight_phi(const Vec3& x, const std::vector<double>& kappa,
                  const std::vector<Vec3>& R);

/// Verifies (phi(x)^{-1} + phi(y)^{-1})/|x-y| >= sum_k kappa_k g_k(x) g_k(y)
/// with g_k(x) = (phi(x) |x - R_k|)^{-1}.
bool triangle_kernel_check(const Vec3& x, const Vec3& y, const std::vector<double>& kappa,
                           const std::vector<Vec3>& R);

/// Left- and right-hand side of the kernel inequality, for inspection.
std::pair<double, double> triangle_kernel_values(const Vec3& x, const Vec3& y,
                                                 const std::vector<double>& kappa,
                                                 const std::vector<Vec3>& R);

}  // namespace rtfw::ionization
