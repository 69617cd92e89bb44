#include "rtfw/ionization.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "rtfw/special_functions.hpp"

namespace rtfw::ionization {

namespace {

const sf::HAnalysisResult& h_analysis_cached() {
  static sf::HAnalysisResult res;
  static std::once_flag flag;
  std::call_once(flag, [] { res = sf::minimize_H(); });
  return res;
}

double dist(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

IonizationBoundReport ionization_bound(double Z) {
  if (!(Z > 0) || !std::isfinite(Z))
    throw std::domain_error("ionization_bound: Z must be finite and > 0");
  const auto& h = h_analysis_cached();
  IonizationBoundReport rep;
  rep.a = h.a;
  rep.b = h.b;
  rep.s_star = h.s_star;
  rep.bound_coefficient = 2.0 / std::sqrt(h.a);
  rep.Z = Z;
  rep.analytic_upper = rep.bound_coefficient * Z;
  return rep;
}

double weight_phi(const Vec3& x, const std::vector<double>& kappa,
                  const std::vector<Vec3>& R) {
  if (kappa.size() != R.size() || kappa.empty())
    throw std::invalid_argument("weight_phi: kappa/R size mismatch");
  double acc = 0;
  for (std::size_t k = 0; k < R.size(); ++k) {
    if (!(kappa[k] > 0)) throw std::domain_error("weight_phi: kappa must be > 0");
    const double d = dist(x, R[k]);
    if (d == 0) throw std::domain_error("weight_phi: evaluation at a nucleus");
    acc += kappa[k] / d;
  }
  return acc;
}

std::pair<double, double> triangle_kernel_values(const Vec3& x, const Vec3& y,
                                                 const std::vector<double>& kappa,
                                                 const std::vector<Vec3>& R) {
  const double px = weight_phi(x, kappa, R);
  const double py = weight_phi(y, kappa, R);
  const double dxy = dist(x, y);
  if (dxy == 0) throw std::domain_error("triangle_kernel_values: x == y");
  const double lhs = (1.0 / px + 1.0 / py) / dxy;
  double rhs = 0;
  for (std::size_t k = 0; k < R.size(); ++k) {
    const double gx = 1.0 / (px * dist(x, R[k]));
    const double gy = 1.0 / (py * dist(y, R[k]));
    rhs += kappa[k] * gx * gy;
  }
  return {lhs, rhs};
}

bool triangle_kernel_check(const Vec3& x, const Vec3& y, const std::vector<double>& kappa,
                           const std::vector<Vec3>& R) {
  const auto [lhs, rhs] = triangle_kernel_values(x, y, kappa, R);
  return lhs >= rhs * (1.0 - 1e-13);
}

}  // namespace rtfw::ionization
