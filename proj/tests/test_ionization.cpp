#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "rtfw/ionization.hpp"

using namespace rtfw::ionization;

TEST_CASE("ionization bound: paper constants and scaling") {
  const auto rep = ionization_bound(1.0);
  CHECK(std::abs(rep.bound_coefficient - 2.557211758) <= 1e-8);
  CHECK(rep.analytic_upper == doctest::Approx(rep.bound_coefficient).epsilon(1e-15));
  CHECK(std::abs(2.0 / std::sqrt(0.6116832747) - 2.557211758) <= 1e-9);
  const auto rep5 = ionization_bound(5.0);
  CHECK(rep5.analytic_upper == doctest::Approx(5.0 * rep.bound_coefficient).epsilon(1e-14));
  CHECK(rep5.a == rep.a);  // cached analysis is reused
  CHECK_THROWS_AS(ionization_bound(0.0), std::domain_error);
}

TEST_CASE("weight function: single-center reduction") {
  const std::vector<double> kappa = {2.0};
  const std::vector<Vec3> R = {{0, 0, 0}};
  const Vec3 x{0.0, 0.0, 3.0};
  CHECK(weight_phi(x, kappa, R) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(weight_phi({0, 0, 0}, kappa, R), std::domain_error);

  // K = 1: the kernel inequality degenerates to the triangle inequality and
  // the two sides agree up to the (|x|+|y|)/|x-y| >= 1 factor
  const Vec3 y{0.0, 4.0, 0.0};
  const auto [lhs, rhs] = triangle_kernel_values(x, y, kappa, R);
  const double dxy = 5.0;
  CHECK(lhs == doctest::Approx(rhs * (3.0 + 4.0) / dxy).epsilon(1e-13));
  CHECK(triangle_kernel_check(x, y, kappa, R));
}

TEST_CASE("kernel inequality: random two-center configurations") {
  const std::vector<double> kappa = {1.0, 1.0};
  const std::vector<Vec3> R = {{0, 0, 1}, {0, 0, -1}};
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int k = 0; k < 500; ++k) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    const Vec3 y{u(rng), u(rng), u(rng)};
    const double dx0 = std::hypot(x[0], x[1], x[2] - 1.0);
    const double dx1 = std::hypot(x[0], x[1], x[2] + 1.0);
    const double dy0 = std::hypot(y[0], y[1], y[2] - 1.0);
    const double dy1 = std::hypot(y[0], y[1], y[2] + 1.0);
    const double dxy = std::hypot(x[0] - y[0], x[1] - y[1], x[2] - y[2]);
    if (std::min({dx0, dx1, dy0, dy1}) < 1e-6 || dxy < 1e-6) continue;
    CHECK(triangle_kernel_check(x, y, kappa, R));
    // swap symmetry
    const auto [l1, r1] = triangle_kernel_values(x, y, kappa, R);
    const auto [l2, r2] = triangle_kernel_values(y, x, kappa, R);
    CHECK(l1 == doctest::Approx(l2).epsilon(1e-13));
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-13));
  }
}

TEST_CASE("kernel inequality with uneven weights and three centers") {
  const std::vector<double> kappa = {0.5, 1.5, 2.0};
  const std::vector<Vec3> R = {{1, 0, 0}, {-1, 0, 0}, {0, 2, 0}};
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    const Vec3 y{u(rng), u(rng), u(rng)};
    try {
      CHECK(triangle_kernel_check(x, y, kappa, R));
    } catch (const std::domain_error&) {
      // sampled a nucleus; skip
    }
  }
}

#include "rtfw/radial_grid.hpp"
#include "rtfw/solver.hpp"

TEST_CASE("analytic bound dominates the solver maximum across the test matrix") {
  const auto rep = ionization_bound(1.0);
  for (double Z : {1.0, 2.0, 5.0, 10.0}) {
    for (double lambda : {0.5, 1.0}) {
      for (double alpha_s : {1.0 / 137.035999084, 0.05}) {
        const auto grid = rtfw::RadialGrid::make_log(
            400, 1e-5, rtfw::solver::suggested_r_max(Z, alpha_s));
        const auto scan =
            rtfw::solver::find_max_ionization(Z, lambda, alpha_s, grid, {}, 5e-3);
        INFO("Z=", Z, " lambda=", lambda, " alpha_s=", alpha_s,
             " N_max=", scan.N_max);
        CHECK(scan.N_max < rep.bound_coefficient * Z);
        CHECK(scan.N_max > 0.5 * Z);  // sanity: a fair part of the charge binds
      }
    }
  }
}
