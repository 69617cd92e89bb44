#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "rtfw/radial_grid.hpp"

// Constrained minimization of the atomic (K = 1) relativistic TFW functional
// over spherically symmetric fields, parametrized by chi = F(p). Momenta are
// in units of mc, energies in mc^2, lengths in reduced Compton wavelengths.

namespace rtfw::solver {

struct PhysicalParams {
  double lambda = 1.0;                       // Weizsacker coefficient
  double alpha_s = 1.0 / 137.035999084;      // fine structure constant
  std::vector<double> Z_list;                // nuclear charges
  std::vector<std::array<double, 3>> R_list; // nuclear positions
  double N = 0;                              // particle-number bound, int rho <= N

  void validate() const;
  double Z_total() const;
  /// Nuclear repulsion sum_{k<l} alpha_s Z_k Z_l / |R_k - R_l|.
  double nuclear_repulsion() const;
};

struct SolverOptions {
  double tol = 1e-9;        // relative projected-residual tolerance
  int max_iter = 400;       // Newton iterations per inner solve
  double p_floor = 1e-12;   // below this momentum, 1/F'(p) terms use their 0 limits
  double n_tol_rel = 1e-6;  // particle-number matching tolerance
  int max_mu_steps = 90;    // outer chemical-potential iterations
  int cg_max = 400;
  bool verbose = false;
};

struct EnergyBreakdown {
  double weizsacker = 0;
  double thomas_fermi = 0;
  double external = 0;
  double hartree = 0;
  double nuclear = 0;
  double total = 0;
};

using ChiField = std::vector<double>;

struct MinimizeResult {
  ChiField chi;
  EnergyBreakdown energy;
  double particle_number = 0;
  double multiplier = 0;      // chemical potential mu >= 0
  double euler_residual = 0;  // scaled stationarity residual at the solution
  int iterations = 0;         // inner Newton iterations, all mu legs summed
  int mu_iterations = 0;
  bool converged = false;
};

/// Energy of a chi field (K = 1 or Z = 0 configurations; chi >= 0 nodewise,
/// chi[n-1] is the Dirichlet boundary value and is treated as 0).
EnergyBreakdown evaluate_energy(const ChiField& chi, const RadialGrid& grid,
                                const PhysicalParams& params);

/// Pointwise L2(grid) gradient field of the total energy with respect to chi
/// (the discrete Euler operator; no chemical-potential term).
std::vector<double> energy_gradient(const ChiField& chi, const RadialGrid& grid,
                                    const PhysicalParams& params,
                                    double p_floor = 1e-12);

double particle_number(const ChiField& chi, const RadialGrid& grid);

/// Hartree potential alpha_s * phi of the electron density implied by chi.
std::vector<double> hartree_potential_of(const ChiField& chi, const RadialGrid& grid,
                                         const PhysicalParams& params);

/// Constrained minimization with int rho <= N via an outer bisection on the
/// chemical potential; monotone merit decrease per accepted inner step.
MinimizeResult minimize(const PhysicalParams& params, const RadialGrid& grid,
                        const SolverOptions& opts = {});

/// Same, with a caller-supplied starting field (warm start).
MinimizeResult minimize_from(const PhysicalParams& params, const RadialGrid& grid,
                             const SolverOptions& opts, ChiField chi0);

/// Scaled norm of the stationarity residual (gradient + mu * dN/dchi),
/// restricted to nodes with p > p_floor.
double euler_residual(const MinimizeResult& result, const RadialGrid& grid,
                      const PhysicalParams& params, double p_floor = 1e-12);

/// Default hydrogenic-type initial field with the cusp scale Z * alpha_s.
ChiField initial_chi(const PhysicalParams& params, const RadialGrid& grid);

struct IonizationLeg {
  double N = 0;
  double particle_number = 0;
  double energy = 0;
  bool bound = false;
  bool converged = false;
};

struct IonizationScan {
  double Z = 0;
  double N_max = 0;
  double bisection_tol = 0;
  std::vector<IonizationLeg> legs;
};

/// Largest N whose constrained minimizer still has particle number N
/// (constraint active), located by bisection on [Z, 4Z] to tol_rel * Z.
IonizationScan find_max_ionization(double Z, double lambda, double alpha_s,
                                   const RadialGrid& grid, const SolverOptions& opts = {},
                                   double tol_rel = 1e-3);

/// Domain size that comfortably holds the atom and its anion tail.
double suggested_r_max(double Z, double alpha_s);

}  // namespace rtfw::solver
