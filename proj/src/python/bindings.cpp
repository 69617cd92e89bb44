#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "rtfw/cutoff_radii.hpp"
#include "rtfw/ftable.hpp"
#include "rtfw/ionization.hpp"
#include "rtfw/radial_grid.hpp"
#include "rtfw/solver.hpp"
#include "rtfw/special_functions.hpp"
#include "rtfw/stability.hpp"
#include "rtfw/tf_atom.hpp"

namespace py = pybind11;

namespace {

py::dict cutoff_dict(const rtfw::cutoff::CutoffResult& c) {
  py::dict d;
  d["beta"] = c.beta;
  d["alpha"] = c.alpha;
  d["r_min"] = c.r_min;
  d["value"] = c.value;
  d["branch"] = c.branch;
  return d;
}

py::dict result_dict(const rtfw::solver::MinimizeResult& r) {
  py::dict e;
  e["weizsacker"] = r.energy.weizsacker;
  e["thomas_fermi"] = r.energy.thomas_fermi;
  e["external"] = r.energy.external;
  e["hartree"] = r.energy.hartree;
  e["nuclear"] = r.energy.nuclear;
  e["total"] = r.energy.total;
  py::dict d;
  d["energy"] = e;
  d["particle_number"] = r.particle_number;
  d["multiplier"] = r.multiplier;
  d["euler_residual"] = r.euler_residual;
  d["iterations"] = r.iterations;
  d["mu_iterations"] = r.mu_iterations;
  d["converged"] = r.converged;
  d["chi"] = r.chi;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "relativistic Thomas-Fermi-Weizsacker functional: special functions, "
            "cutoff radii, stability constants, and the atomic radial solver";

  using namespace rtfw;

  m.def("f", &sf::f, py::arg("t"), "Weizsacker weight f(t)");
  m.def("f_squared", &sf::f_squared, py::arg("t"));
  m.def("F", &sf::F_fast, py::arg("t"), "antiderivative F(t) = int_0^t f (table path)");
  m.def("F_exact", &sf::F_exact, py::arg("t"), "F by adaptive quadrature");
  m.def("F_inverse", &sf::F_inverse, py::arg("y"));
  m.def("t_tf", &sf::t_tf, py::arg("s"), "TF kinetic energy density (rest mass removed)");
  m.def("H", &sf::H_exact, py::arg("s"), "H(s) = F(s)/(s f(s))");
  m.def("g", &sf::g_fn, py::arg("s"));
  m.def("minimize_H", [] {
    const auto h = sf::minimize_H();
    py::dict d;
    d["s_star"] = h.s_star;
    d["a"] = h.a;
    d["b"] = h.b;
    d["bound_coefficient"] = 2.0 / std::sqrt(h.a);
    return d;
  });
  m.def("min_g", [] {
    const auto g = sf::min_g();
    return py::make_tuple(g.s_min, g.c_g);
  });

  m.def("F_beta", &cutoff::F_beta, py::arg("r"), py::arg("beta"));
  m.def("F_tilde", &cutoff::F_tilde, py::arg("r"), py::arg("alpha"), py::arg("beta"));
  m.def("R_of_beta", [](double beta) { return cutoff_dict(cutoff::R_of_beta(beta)); },
        py::arg("beta"));
  m.def("R_tilde", [](double alpha, double beta) {
          return cutoff_dict(cutoff::R_tilde(alpha, beta));
        },
        py::arg("alpha"), py::arg("beta"));

  m.def("e_tf", &stability::e_tf_cached, "atomic TF infimum magnitude at gamma = 1, Z = 1");
  m.def("teller_constant", [](const std::vector<double>& z) {
          const auto [A, e] = stability::teller_constant(z);
          return py::make_tuple(A, e);
        },
        py::arg("Z_list"));
  m.def("stability_report",
        [](double lam, double alpha_s, const std::vector<double>& z, double z_inf, int K,
           double N) {
          stability::StabilityInputs in;
          in.lambda = lam;
          in.alpha_s = alpha_s;
          in.Z_list = z;
          in.Z_inf = z_inf;
          in.K = K;
          in.N = N;
          const auto r = stability::stability_constant(in);
          py::dict d;
          d["A"] = r.A;
          d["e_tf"] = r.e_tf;
          d["c_s"] = r.c_s;
          d["beta_star"] = r.beta_star;
          d["R_beta_star"] = r.R_beta_star;
          d["arsinh_R_beta_star"] = r.arsinh_R;
          d["C_of_A"] = r.C_of_A;
          d["log10_C_of_A"] = r.log10_C_of_A;
          d["lower_bound"] = r.lower_bound;
          return d;
        },
        py::arg("lambda_w") = 1.0, py::arg("alpha_s") = 1.0 / 137.035999084,
        py::arg("Z_list") = std::vector<double>{1.0}, py::arg("Z_inf") = 1.0,
        py::arg("K") = 1, py::arg("N") = 1.0);

  m.def("ionization_bound", [](double Z) {
          const auto r = ionization::ionization_bound(Z);
          py::dict d;
          d["a"] = r.a;
          d["b"] = r.b;
          d["s_star"] = r.s_star;
          d["bound_coefficient"] = r.bound_coefficient;
          d["Z"] = r.Z;
          d["analytic_upper"] = r.analytic_upper;
          return d;
        },
        py::arg("Z"));

  m.def("solve_atom",
        [](double Z, double N, double lam, double alpha_s, std::size_t n, double r_min,
           double r_max, double tol, int max_iter) {
          solver::PhysicalParams p;
          p.lambda = lam;
          p.alpha_s = alpha_s;
          p.Z_list = {Z};
          p.R_list = {{0, 0, 0}};
          p.N = N;
          if (r_max <= 0) r_max = solver::suggested_r_max(Z, alpha_s);
          const auto grid = RadialGrid::make_log(n, r_min, r_max);
          solver::SolverOptions o;
          o.tol = tol;
          o.max_iter = max_iter;
          return result_dict(solver::minimize(p, grid, o));
        },
        py::arg("Z"), py::arg("N"), py::arg("lambda_w") = 1.0,
        py::arg("alpha_s") = 1.0 / 137.035999084, py::arg("n") = 2000,
        py::arg("r_min") = 1e-5, py::arg("r_max") = 0.0, py::arg("tol") = 1e-9,
        py::arg("max_iter") = 400);

  m.def("max_ionization",
        [](double Z, double lam, double alpha_s, std::size_t n, double r_min, double r_max,
           double tol_rel) {
          if (r_max <= 0) r_max = solver::suggested_r_max(Z, alpha_s);
          const auto grid = RadialGrid::make_log(n, r_min, r_max);
          const auto scan = solver::find_max_ionization(Z, lam, alpha_s, grid, {}, tol_rel);
          py::dict d;
          d["Z"] = scan.Z;
          d["N_max"] = scan.N_max;
          d["bisection_tol"] = scan.bisection_tol;
          return d;
        },
        py::arg("Z"), py::arg("lambda_w") = 1.0, py::arg("alpha_s") = 1.0 / 137.035999084,
        py::arg("n") = 600, py::arg("r_min") = 1e-5, py::arg("r_max") = 0.0,
        py::arg("tol_rel") = 1e-3);
}
