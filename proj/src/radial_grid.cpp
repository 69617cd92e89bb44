#include "rtfw/radial_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtfw {

namespace {

constexpr double kPi = std::numbers::pi;

// Exact integrals of e^{k u} against the linear shape functions on [0, h]:
//   I0 = int e^{k u} (1 - u/h) du,  I1 = int e^{k u} (u/h) du.
struct ShapeWeights {
  double i0, i1;
};

ShapeWeights shape_weights(double k, double h) {
  const double e = std::expm1(k * h);
  return {-1.0 / k + e / (k * k * h), (e + 1.0) / k - e / (k * k * h)};
}

}  // namespace

RadialGrid RadialGrid::make_log(std::size_t n, double r_min, double r_max) {
  if (n < 8) throw std::invalid_argument("RadialGrid: need at least 8 nodes");
  if (!(r_min > 0) || !(r_max > r_min))
    throw std::invalid_argument("RadialGrid: require 0 < r_min < r_max");
  RadialGrid g;
  g.r_min = r_min;
  g.r_max = r_max;
  g.r.resize(n);
  const double h = std::log(r_max / r_min) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) g.r[i] = r_min * std::exp(double(i) * h);
  g.r.front() = r_min;
  g.r.back() = r_max;

  const auto s3 = shape_weights(3.0, h);  // r^3 dx = r^2 dr measure
  const auto s2 = shape_weights(2.0, h);  // r^2 dx = r dr measure
  g.w.assign(n, 0.0);
  g.w_over_r.assign(n, 0.0);
  g.cellA.resize(n - 1);
  g.cellB.resize(n - 1);
  g.cellA1.resize(n - 1);
  g.cellB1.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double r3 = 4.0 * kPi * g.r[i] * g.r[i] * g.r[i];
    const double r2 = 4.0 * kPi * g.r[i] * g.r[i];
    g.cellA[i] = r3 * s3.i0;
    g.cellB[i] = r3 * s3.i1;
    g.cellA1[i] = r2 * s2.i0;
    g.cellB1[i] = r2 * s2.i1;
    g.w[i] += g.cellA[i];
    g.w[i + 1] += g.cellB[i];
    g.w_over_r[i] += g.cellA1[i];
    g.w_over_r[i + 1] += g.cellB1[i];
  }
  // Inner ball [0, r_min], integrand taken constant at its node-0 value.
  g.w[0] += (4.0 / 3.0) * kPi * r_min * r_min * r_min;
  g.w_over_r[0] += 2.0 * kPi * r_min * r_min;

  // Weizsacker interval weights: int_{r_i}^{r_{i+1}} 4 pi r^2 dr / dr_i^2,
  // exact for chi' constant on the interval.
  g.q_w.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dr = g.r[i + 1] - g.r[i];
    const double vol = (4.0 / 3.0) * kPi *
                       (g.r[i + 1] * g.r[i + 1] * g.r[i + 1] - g.r[i] * g.r[i] * g.r[i]);
    g.q_w[i] = vol / (dr * dr);
  }
  return g;
}

double RadialGrid::volume() const {
  return (4.0 / 3.0) * kPi * r_max * r_max * r_max;
}

std::vector<double> RadialGrid::hartree_potential(const std::vector<double>& rho) const {
  const std::size_t n = r.size();
  if (rho.size() != n) throw std::invalid_argument("hartree_potential: size mismatch");
  std::vector<double> phi(n);
  // inner charge Q(r_i), cumulative from the origin
  double Q = (4.0 / 3.0) * kPi * r_min * r_min * r_min * rho[0];
  phi[0] = Q / r[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Q += cellA[i] * rho[i] + cellB[i] * rho[i + 1];
    phi[i + 1] = Q / r[i + 1];
  }
  // outer potential V(r_i) = int_{r_i}^{r_max} rho 4 pi s ds, cumulative inward
  double V = 0.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    V += cellA1[i] * rho[i] + cellB1[i] * rho[i + 1];
    phi[i] += V;
  }
  return phi;
}

std::vector<double> RadialGrid::hartree_potential_adjoint(const std::vector<double>& y) const {
  const std::size_t n = r.size();
  if (y.size() != n) throw std::invalid_argument("hartree_potential_adjoint: size mismatch");
  std::vector<double> out(n, 0.0);
  // Q-part adjoint: rho_j reaches Q_i (hence y_i / r_i) for every i past the
  // cell, so the coefficients are suffix sums of y/r.
  std::vector<double> suf(n + 1, 0.0);  // suf[k] = sum_{i >= k} y_i / r_i
  for (std::size_t i = n; i-- > 0;) suf[i] = suf[i + 1] + y[i] / r[i];
  out[0] += (4.0 / 3.0) * kPi * r_min * r_min * r_min * suf[0];
  for (std::size_t j = 0; j + 1 < n; ++j) {
    out[j] += cellA[j] * suf[j + 1];
    out[j + 1] += cellB[j] * suf[j + 1];
  }
  // V-part adjoint: rho_j reaches V_i for every i at or before the cell.
  std::vector<double> pre(n + 1, 0.0);  // pre[k] = sum_{i < k} y_i
  for (std::size_t i = 0; i < n; ++i) pre[i + 1] = pre[i] + y[i];
  for (std::size_t j = 0; j + 1 < n; ++j) {
    out[j] += cellA1[j] * pre[j + 1];
    out[j + 1] += cellB1[j] * pre[j + 1];
  }
  return out;
}

std::vector<double> RadialGrid::coulomb_K_apply(const std::vector<double>& y) const {
  const std::size_t n = r.size();
  const auto phi = hartree_potential(y);
  std::vector<double> wy(n);
  for (std::size_t i = 0; i < n; ++i) wy[i] = w[i] * y[i];
  auto adj = hartree_potential_adjoint(wy);
  for (std::size_t i = 0; i < n; ++i) adj[i] = 0.5 * (w[i] * phi[i] + adj[i]);
  return adj;
}

double RadialGrid::coulomb_D(const std::vector<double>& a, const std::vector<double>& b) const {
  const auto Kb = coulomb_K_apply(b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * Kb[i];
  return 0.5 * acc;
}

}  // namespace rtfw
