#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "rtfw/cutoff_radii.hpp"
#include "rtfw/special_functions.hpp"

using namespace rtfw;

// brute-force 1D log-grid minimizer, used as the independent oracle
static double brute_min(double alpha, double R_beta, double lo, double hi, std::size_t n) {
  double best_r = lo, best_v = cutoff::F_tilde_with_R(lo, alpha, R_beta);
  const double step = std::log(hi / lo) / double(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double r = lo * std::exp(double(i) * step);
    const double v = cutoff::F_tilde_with_R(r, alpha, R_beta);
    if (v < best_v) {
      best_v = v;
      best_r = r;
    }
  }
  return best_r;
}

TEST_CASE("F_beta: value, divergence, increasing derivative") {
  CHECK(cutoff::F_beta(1.0, 1.0) == doctest::Approx(2.4605616920211486).epsilon(1e-13));
  CHECK(cutoff::F_beta(1e-9, 1.0) > 1e10);
  CHECK(cutoff::F_beta(1e9, 1.0) > 1e8);
  double prev = -1e300;
  for (double r : sf::log_grid(1e-3, 1e3, 200)) {
    const double d = cutoff::F_beta_prime(r, 1.0);
    CHECK(d > prev);
    prev = d;
  }
  CHECK_THROWS_AS(cutoff::F_beta(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(cutoff::F_beta(1.0, -1.0), std::domain_error);
}

TEST_CASE("R_of_beta: frozen values, monotonicity, minimality") {
  const auto r1 = cutoff::R_of_beta(1.0);
  CHECK(r1.r_min == doctest::Approx(1.4273897243694599).epsilon(1e-11));
  CHECK(r1.value == doctest::Approx(1.8834963131212044).epsilon(1e-12));
  CHECK(cutoff::R_of_beta(0.1).r_min == doctest::Approx(0.8609127593365183).epsilon(1e-11));
  CHECK(cutoff::R_of_beta(10.0).r_min == doctest::Approx(2.4765253404733668).epsilon(1e-11));
  CHECK(cutoff::R_of_beta(1.0).r_min > cutoff::R_of_beta(0.1).r_min);
  CHECK(cutoff::R_of_beta(10.0).r_min > cutoff::R_of_beta(1.0).r_min);
  CHECK(cutoff::R_of_beta(1e-6).r_min < 0.1);  // ~ (4 beta)^{1/5} = 0.083
  CHECK(cutoff::R_of_beta(1e6).r_min > 25.0);
  CHECK(cutoff::F_beta(r1.r_min * 1.001, 1.0) > r1.value);
  CHECK(cutoff::F_beta(r1.r_min * 0.999, 1.0) > r1.value);
  // closed-form inversion agrees
  CHECK(cutoff::beta_of_R(r1.r_min) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("F_tilde: continuity and derivative jump at R_beta") {
  const double R = cutoff::R_of_beta(1.0).r_min;
  const double above = cutoff::F_tilde(R * (1 + 1e-13), 1.0, 1.0);
  const double below = cutoff::F_tilde(R * (1 - 1e-13), 1.0, 1.0);
  CHECK(std::abs(above - below) <= 1e-11 * above);
  // one-sided finite differences around the kink
  const double h = 1e-6 * R;
  const double d_plus = (cutoff::F_tilde(R + 2 * h, 1.0, 1.0) - cutoff::F_tilde(R + h, 1.0, 1.0)) / h;
  const double d_minus = (cutoff::F_tilde(R - h, 1.0, 1.0) - cutoff::F_tilde(R - 2 * h, 1.0, 1.0)) / h;
  const double a = std::asinh(R);
  const double jump = 3.0 / (R * R * a * a * a);
  CHECK(d_minus - d_plus == doctest::Approx(-jump).epsilon(1e-4));
  // F_tilde(., beta, beta) >= F_beta(., beta)
  for (double r : sf::log_grid(0.05, 20.0, 64))
    CHECK(cutoff::F_tilde(r, 1.0, 1.0) >= cutoff::F_beta(r, 1.0) - 1e-14);
}

TEST_CASE("R_tilde: diagonal identity, branches, monotonicity") {
  for (double beta : {0.1, 1.0, 10.0}) {
    const auto rt = cutoff::R_tilde(beta, beta);
    const auto r = cutoff::R_of_beta(beta);
    CHECK(std::abs(rt.r_min - r.r_min) <= 1e-10 * r.r_min);
    CHECK(rt.branch == "kink");
  }
  CHECK(cutoff::R_tilde(0.5, 1.0).branch == "inner");
  CHECK(cutoff::R_tilde(0.5, 1.0).r_min == doctest::Approx(1.3051286432973929).epsilon(1e-11));
  CHECK(cutoff::R_tilde(4.0, 1.0).branch == "outer");
  CHECK(cutoff::R_tilde(4.0, 1.0).r_min == doctest::Approx(1.6137432980513935).epsilon(1e-11));
  // strictly increasing in alpha beyond the kink plateau
  CHECK(cutoff::R_tilde(8.0, 1.0).r_min > cutoff::R_tilde(6.0, 1.0).r_min);
  CHECK(cutoff::R_tilde(6.0, 1.0).r_min > cutoff::R_tilde(4.0, 1.0).r_min);
  // nondecreasing across the whole alpha range
  double prev = 0;
  for (double alpha : sf::log_grid(1e-3, 1e3, 100)) {
    const double r = cutoff::R_tilde(alpha, 1.0).r_min;
    CHECK(r >= prev - 1e-14);
    prev = r;
  }
}

TEST_CASE("brute-force oracle agrees with the closed-form minimizers") {
  for (auto [alpha, beta] : {std::pair{0.5, 1.0}, std::pair{2.0, 1.0}, std::pair{1.0, 1.0},
                             std::pair{7.0, 0.3}, std::pair{0.02, 4.0}}) {
    const double R = cutoff::R_of_beta(beta).r_min;
    const auto rt = cutoff::R_tilde(alpha, beta);
    const double brute = brute_min(alpha, R, rt.r_min * 1e-3, rt.r_min * 1e3, 200001);
    CHECK(std::abs(brute - rt.r_min) <= 1e-4 * rt.r_min);
  }
}

TEST_CASE("strict convexity: midpoint inequality on random triples") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> logu(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const double alpha = std::pow(10.0, logu(rng));
    const double beta = std::pow(10.0, logu(rng));
    const double R = cutoff::R_of_beta(beta).r_min;
    const double r1 = std::pow(10.0, logu(rng));
    const double r3 = r1 * (1.0 + std::abs(logu(rng)) + 0.1);
    const double r2 = 0.5 * (r1 + r3);
    const double lhs = cutoff::F_tilde_with_R(r2, alpha, R);
    const double rhs = 0.5 * (cutoff::F_tilde_with_R(r1, alpha, R) +
                              cutoff::F_tilde_with_R(r3, alpha, R));
    CHECK(lhs < rhs);
  }
}
