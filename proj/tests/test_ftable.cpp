#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "rtfw/ftable.hpp"
#include "rtfw/special_functions.hpp"

using namespace rtfw;

TEST_CASE("table invariants: monotone values, zero at zero, sandwich") {
  const auto& t = sf::FTable::shared();
  const auto& nodes = t.nodes();
  const auto& F = t.F_values();
  REQUIRE(nodes.size() == F.size());
  CHECK(nodes[0] == 0.0);
  CHECK(F[0] == 0.0);
  for (std::size_t i = 1; i < F.size(); ++i) CHECK(F[i] > F[i - 1]);
  for (std::size_t i = 1; i < nodes.size(); i += 97) {
    const double s = nodes[i];
    CHECK(F[i] > s * std::sqrt(std::asinh(s)) / 2.0);
    CHECK(F[i] <= s * sf::f(s));
  }
}

TEST_CASE("interpolated F agrees with direct quadrature off the nodes") {
  const auto& t = sf::FTable::shared();
  std::mt19937 rng(7121);
  std::uniform_real_distribution<double> u(-7.5, 7.5);
  for (int k = 0; k < 150; ++k) {
    const double x = std::pow(10.0, u(rng));
    const double exact = sf::F_exact(x);
    CHECK(std::abs(t.F(x) - exact) <= 1e-10 * exact);
  }
  // below the first node the series takes over
  CHECK(t.F(1e-9) == doctest::Approx(sf::F_exact(1e-9)).epsilon(1e-12));
  // above max_node the quadrature continuation takes over
  const double big = t.max_node() * 7.3;
  CHECK(t.F(big) == doctest::Approx(sf::F_exact(big)).epsilon(1e-10));
}

TEST_CASE("interpolant derivative is consistent with f") {
  const auto& t = sf::FTable::shared();
  const auto grid = sf::log_grid(1e-7, 1e7, 300);
  for (double x : grid) {
    CHECK(t.F_prime(x) == doctest::Approx(sf::f(x)).epsilon(1e-8));
    const double h = 1e-5 * x;
    const double fd = (t.F(x + h) - t.F(x - h)) / (2 * h);
    CHECK(fd == doctest::Approx(sf::f(x)).epsilon(1e-6));
  }
}

TEST_CASE("inverse round trip over the working range") {
  const auto& t = sf::FTable::shared();
  const auto grid = sf::log_grid(1e-8, 1e8, 5000);
  for (double x : grid) {
    const double back = t.inverse(t.F(x));
    CHECK(std::abs(back - x) <= 1e-9 * std::max(1.0, x));
  }
  CHECK(t.inverse(0.0) == 0.0);
  // fast-path inverse satisfies the exact-F tolerance contract
  for (double y : {1e-6, 0.37, 12.0, 4.2e5}) {
    const double x = sf::F_inverse(y);
    CHECK(std::abs(sf::F_exact(x) - y) <= 1e-10 * std::max(1.0, y));
  }
}

TEST_CASE("json serialization round-trips bit-exactly") {
  sf::FTable small(sf::FTable::Params{256, 1e-4, 1e4});
  const auto text = small.to_json();
  const auto loaded = sf::FTable::from_json(text);
  REQUIRE(loaded.F_values().size() == small.F_values().size());
  for (std::size_t i = 0; i < small.F_values().size(); ++i) {
    CHECK(loaded.F_values()[i] == small.F_values()[i]);
    CHECK(loaded.nodes()[i] == small.nodes()[i]);
  }
  CHECK(loaded.F(3.7) == small.F(3.7));
  CHECK_THROWS(sf::FTable::from_json("{\"schema\":\"bogus\"}"));
}
