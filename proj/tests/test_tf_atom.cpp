#include <doctest.h>

#include <cmath>

#include "rtfw/tf_atom.hpp"

using namespace rtfw::stability;

TEST_CASE("tf atom: two independent routes to e_tf agree") {
  const auto scf = tf_atom_minimize();
  const auto shoot = tf_shooting();
  REQUIRE(scf.converged);
  CHECK(std::abs(scf.e_tf - shoot.e_tf) <= 1e-6 * shoot.e_tf);
  CHECK(scf.e_tf > 0);
  // the shooting slope of the dimensionless equation
  CHECK(shoot.slope == doctest::Approx(1.5880710).epsilon(5e-8));
  // exact integral identity J = (5/7) slope
  CHECK(shoot.j_integral == doctest::Approx(5.0 / 7.0 * shoot.slope).epsilon(1e-7));
}

TEST_CASE("tf atom: virial structure of the minimizer") {
  const auto scf = tf_atom_minimize();
  // neutral: all of the nuclear charge is bound
  CHECK(scf.particle_number == doctest::Approx(1.0).epsilon(1e-5));
  // attraction = (7/3) kinetic, repulsion = (1/3) kinetic, E = -kinetic
  CHECK(scf.external == doctest::Approx(7.0 / 3.0 * scf.kinetic).epsilon(1e-5));
  CHECK(scf.hartree == doctest::Approx(scf.kinetic / 3.0).epsilon(1e-5));
  CHECK(scf.e_tf == doctest::Approx(scf.kinetic).epsilon(1e-5));
}

TEST_CASE("tf atom: grid-resolution stability") {
  TfAtomOptions coarse;
  coarse.n = 10000;
  const double e1 = tf_atom_minimize(coarse).e_tf;
  const double e2 = tf_atom_minimize().e_tf;
  CHECK(std::abs(e1 - e2) <= 2e-6 * e2);
  CHECK(e_tf_cached() == doctest::Approx(e2).epsilon(1e-12));
}
