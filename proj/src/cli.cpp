#include "rtfw/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtfw/cutoff_radii.hpp"
#include "rtfw/ftable.hpp"
#include "rtfw/ionization.hpp"
#include "rtfw/radial_grid.hpp"
#include "rtfw/solver.hpp"
#include "rtfw/special_functions.hpp"
#include "rtfw/stability.hpp"
#include "rtfw/tf_atom.hpp"

namespace rtfw::cli {

namespace {

using nlohmann::json;

json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

void emit(const json& j, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << j.dump(2) << "\n";
  }
}

// Expands "--config file.json" into option tokens inserted right after the
// subcommand, so explicit command-line flags (parsed later) win.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] != "--config") continue;
    if (i + 1 >= args.size()) throw std::domain_error("--config requires a file path");
    const std::string path = args[i + 1];
    args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
    std::ifstream f(path);
    if (!f) throw std::domain_error("cannot read config file: " + path);
    json cfg;
    f >> cfg;
    if (!cfg.is_object()) throw std::domain_error("config must be a JSON object");
    std::vector<std::string> extra;
    for (const auto& [key, value] : cfg.items()) {
      std::string v;
      if (value.is_array()) {
        for (const auto& e : value) {
          if (!v.empty()) v += ",";
          v += e.dump();
        }
      } else if (value.is_string()) {
        v = value.get<std::string>();
      } else {
        v = value.dump();
      }
      extra.push_back("--" + key + "=" + v);
    }
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    break;
  }
  return args;
}

json cutoff_json(const cutoff::CutoffResult& c) {
  return {{"beta", num(c.beta)},
          {"alpha", num(c.alpha)},
          {"r_min", num(c.r_min)},
          {"value", num(c.value)},
          {"branch", c.branch}};
}

json energy_json(const solver::EnergyBreakdown& e) {
  return {{"weizsacker", num(e.weizsacker)}, {"thomas_fermi", num(e.thomas_fermi)},
          {"external", num(e.external)},     {"hartree", num(e.hartree)},
          {"nuclear", num(e.nuclear)},       {"total", num(e.total)}};
}

json result_json(const solver::MinimizeResult& r) {
  return {{"energy", energy_json(r.energy)},
          {"particle_number", num(r.particle_number)},
          {"multiplier", num(r.multiplier)},
          {"euler_residual", num(r.euler_residual)},
          {"iterations", r.iterations},
          {"mu_iterations", r.mu_iterations},
          {"converged", r.converged}};
}

struct SolveFlags {
  double Z = 1, N = 1, lambda = 1, alpha_s = 1.0 / 137.035999084;
  std::size_t grid_n = 2000;
  double grid_rmin = 1e-5, grid_rmax = 60.0;  // rmax 0 selects the auto size
  double tol = 1e-9;
  int max_iter = 400;

  void add_to(CLI::App* cmd, bool with_n, bool with_z = true) {
    if (with_z) cmd->add_option("--Z", Z, "nuclear charge");
    if (with_n) cmd->add_option("--N", N, "particle-number bound (int rho <= N)");
    cmd->add_option("--lambda", lambda, "Weizsacker coefficient (units of mc^2)");
    cmd->add_option("--alpha-s", alpha_s, "fine structure constant");
    cmd->add_option("--grid-n", grid_n, "radial nodes");
    cmd->add_option("--grid-rmin", grid_rmin, "inner radius (reduced Compton wavelengths)");
    cmd->add_option("--grid-rmax", grid_rmax, "outer radius; 0 picks a Z-dependent size");
    cmd->add_option("--tol", tol, "relative projected-residual tolerance");
    cmd->add_option("--max-iter", max_iter, "Newton iterations per inner solve");
  }
  RadialGrid make_grid() const {
    const double rmax =
        grid_rmax > 0 ? grid_rmax : solver::suggested_r_max(Z, alpha_s);
    return RadialGrid::make_log(grid_n, grid_rmin, rmax);
  }
  solver::PhysicalParams params() const {
    solver::PhysicalParams p;
    p.lambda = lambda;
    p.alpha_s = alpha_s;
    p.Z_list = {Z};
    p.R_list = {{0, 0, 0}};
    p.N = N;
    return p;
  }
  solver::SolverOptions options() const {
    solver::SolverOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    return o;
  }
};

int run_impl(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"relativistic Thomas-Fermi-Weizsacker toolkit (momenta in mc, "
               "energies in mc^2, lengths in reduced Compton wavelengths)"};
  app.require_subcommand(1);
  // later occurrences win, so --config expansions can be overridden by flags
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string out_path;

  // ---- constants ----
  auto* c_const = app.add_subcommand(
      "constants", "H-analysis constants, g minimum, TF atom constant e_tf");
  c_const->add_option("--out", out_path, "write JSON here instead of stdout");

  // ---- table ----
  auto* c_table = app.add_subcommand(
      "table", "special-function table: CSV columns t, f, F, H, t_tf, g");
  std::size_t tbl_points = 1024;
  double tbl_lo = 1e-8, tbl_hi = 1e8;
  std::string tbl_save, tbl_load;
  c_table->add_option("--points", tbl_points, "number of log-spaced rows");
  c_table->add_option("--t-min", tbl_lo, "first abscissa");
  c_table->add_option("--t-max", tbl_hi, "last abscissa");
  c_table->add_option("--save", tbl_save, "serialize the cached table to this JSON file");
  c_table->add_option("--load", tbl_load, "check-load a serialized table before emitting");
  c_table->add_option("--out", out_path, "write CSV here instead of stdout");

  // ---- verify-bounds ----
  auto* c_verify = app.add_subcommand(
      "verify-bounds", "check the bounding inequalities and the phase-space sandwich");
  std::size_t vb_samples = 10000;
  double vb_lo = 1e-8, vb_hi = 1e8;
  unsigned vb_seed = 0;
  std::size_t vb_random = 0;
  c_verify->add_option("--samples", vb_samples, "points on the log grid");
  c_verify->add_option("--lo", vb_lo, "grid lower end");
  c_verify->add_option("--hi", vb_hi, "grid upper end");
  c_verify->add_option("--random", vb_random, "extra log-uniform random points");
  c_verify->add_option("--seed", vb_seed, "seed for the random points");
  c_verify->add_option("--out", out_path, "write JSON here instead of stdout");

  // ---- cutoff ----
  auto* c_cut = app.add_subcommand("cutoff", "cutoff radii R_beta and R_tilde(alpha, beta)");
  double cut_beta = 1.0;
  double cut_alpha = 0.0;
  c_cut->add_option("--beta", cut_beta, "beta parameter")->required();
  c_cut->add_option("--alpha", cut_alpha, "alpha parameter (adds the R_tilde result)");
  c_cut->add_option("--out", out_path, "write JSON here instead of stdout");

  // ---- stability-bound ----
  auto* c_stab = app.add_subcommand(
      "stability-bound", "lower-bound constant C(A) and inf E >= -N - C(A)");
  stability::StabilityInputs stab_in;
  std::vector<double> stab_Z;
  c_stab->add_option("--lambda", stab_in.lambda, "Weizsacker coefficient");
  c_stab->add_option("--alpha-s", stab_in.alpha_s, "fine structure constant");
  c_stab->add_option("--Z", stab_Z, "nuclear charges")->delimiter(',');
  c_stab->add_option("--Z-inf", stab_in.Z_inf, "uniform charge bound for the corollary form");
  c_stab->add_option("--K", stab_in.K, "number of nuclei for the corollary form");
  c_stab->add_option("--N", stab_in.N, "particle number in the reported bound");
  c_stab->add_option("--out", out_path, "write JSON here instead of stdout");

  // ---- solve-atom ----
  auto* c_solve = app.add_subcommand(
      "solve-atom", "constrained minimization of the atomic functional");
  SolveFlags sf_solve;
  sf_solve.add_to(c_solve, true);
  std::string profile_path;
  c_solve->add_option("--profile", profile_path,
                      "also write a radial profile CSV (r, chi, p, rho, hartree_potential)");
  c_solve->add_option("--out", out_path, "write JSON here instead of stdout");

  // ---- ionize ----
  auto* c_ion = app.add_subcommand(
      "ionize", "maximal bound particle number by bisection on the constraint");
  SolveFlags sf_ion;
  std::vector<double> ion_Z = {1.0};
  bool ion_analytic = false;
  double ion_tol = 1e-3;
  int jobs = 1;
  sf_ion.grid_n = 600;
  sf_ion.grid_rmax = 0;  // auto
  c_ion->add_option("--Z", ion_Z, "nuclear charges to scan")->delimiter(',');
  sf_ion.add_to(c_ion, false, false);
  c_ion->add_flag("--analytic", ion_analytic, "include the analytic 2/sqrt(a) Z bound");
  c_ion->add_option("--bisect-tol", ion_tol, "bisection tolerance relative to Z");
  c_ion->add_option("--jobs", jobs, "parallel scan workers");
  c_ion->add_option("--out", out_path, "write JSON here instead of stdout");

  std::vector<std::string> args = apply_config(raw_args);
  std::vector<const char*> argv;
  argv.push_back("rtfw");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::ostringstream help;
      const int code = app.exit(e, help, help);
      out << help.str();
      return code;
    }
    err << json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  }

  if (c_const->parsed()) {
    const auto h = sf::minimize_H();
    const auto gm = sf::min_g();
    const double e_tf = stability::e_tf_cached();
    const auto shoot = stability::tf_shooting();
    json j{{"schema", "rtfw.constants/1"},
           {"a", num(h.a)},
           {"s_star", num(h.s_star)},
           {"b", num(h.b)},
           {"bound_coefficient", num(2.0 / std::sqrt(h.a))},
           {"c_g", num(gm.c_g)},
           {"s_min_g", num(gm.s_min)},
           {"e_tf", num(e_tf)},
           {"e_tf_shooting", num(shoot.e_tf)},
           {"tf_slope", num(shoot.slope)},
           {"sobolev_c_s", num(stability::sobolev_constant())}};
    emit(j, out_path, out);
    return 0;
  }

  if (c_table->parsed()) {
    if (!tbl_load.empty()) {
      std::ifstream f(tbl_load);
      if (!f) throw std::domain_error("cannot read table file: " + tbl_load);
      std::stringstream ss;
      ss << f.rdbuf();
      (void)sf::FTable::from_json(ss.str());
    }
    if (!tbl_save.empty()) {
      std::ofstream f(tbl_save);
      if (!f) throw std::runtime_error("cannot open table file: " + tbl_save);
      f << sf::FTable::shared().to_json() << "\n";
    }
    std::ostringstream csv;
    csv << "t,f,F,H,t_tf,g\n" << std::setprecision(17);
    for (double t : sf::log_grid(tbl_lo, tbl_hi, tbl_points))
      csv << t << "," << sf::f(t) << "," << sf::F_fast(t) << "," << sf::H_exact(t) << ","
          << sf::t_tf(t) << "," << sf::g_fn(t) << "\n";
    if (out_path.empty()) {
      out << csv.str();
    } else {
      std::ofstream f(out_path);
      if (!f) throw std::runtime_error("cannot open output file: " + out_path);
      f << csv.str();
    }
    return 0;
  }

  if (c_verify->parsed()) {
    auto grid = sf::log_grid(vb_lo, vb_hi, vb_samples);
    if (vb_random > 0) {
      std::mt19937 rng(vb_seed);
      std::uniform_real_distribution<double> u(std::log(vb_lo), std::log(vb_hi));
      for (std::size_t k = 0; k < vb_random; ++k) grid.push_back(std::exp(u(rng)));
      std::sort(grid.begin(), grid.end());
    }
    const auto rep = sf::appendix_bounds_report(grid);
    const auto ps = sf::phase_space_sandwich_report(grid);
    auto fail_json = [](const sf::BoundsReport& r) {
      json fails = json::array();
      for (const auto& f : r.failures)
        fails.push_back({{"inequality", f.inequality}, {"point", num(f.point)},
                         {"margin", num(f.margin)}});
      return fails;
    };
    json j{{"schema", "rtfw.verify-bounds/1"},
           {"samples", vb_samples},
           {"appendix_checks", rep.checks_run},
           {"appendix_failures", fail_json(rep)},
           {"sandwich_checks", ps.checks_run},
           {"sandwich_failures", fail_json(ps)},
           {"all_passed", rep.all_passed() && ps.all_passed()}};
    emit(j, out_path, out);
    return rep.all_passed() && ps.all_passed() ? 0 : 2;
  }

  if (c_cut->parsed()) {
    json j{{"schema", "rtfw.cutoff/1"}, {"R_of_beta", cutoff_json(cutoff::R_of_beta(cut_beta))}};
    if (c_cut->count("--alpha"))
      j["R_tilde"] = cutoff_json(cutoff::R_tilde(cut_alpha, cut_beta));
    emit(j, out_path, out);
    return 0;
  }

  if (c_stab->parsed()) {
    stab_in.Z_list = stab_Z;
    if (stab_in.Z_inf == 0)
      for (double z : stab_Z) stab_in.Z_inf = std::max(stab_in.Z_inf, z);
    if (!c_stab->count("--K")) stab_in.K = int(std::max<std::size_t>(stab_Z.size(), 1));
    const auto rep = stability::stability_constant(stab_in);
    json j{{"schema", "rtfw.stability/1"},
           {"A", num(rep.A)},
           {"e_tf", num(rep.e_tf)},
           {"c_s", num(rep.c_s)},
           {"lambda", num(rep.lambda)},
           {"alpha_s", num(rep.alpha_s)},
           {"N", num(rep.N)},
           {"beta_star", num(rep.beta_star)},
           {"R_beta_star", num(rep.R_beta_star)},
           {"arsinh_R_beta_star", num(rep.arsinh_R)},
           {"C_of_A", num(rep.C_of_A)},
           {"log10_C_of_A", num(rep.log10_C_of_A)},
           {"lower_bound", num(rep.lower_bound)},
           {"corollary_C", num(rep.corollary_C)},
           {"corollary_bound", num(rep.corollary_bound)},
           {"case1_T_coeff", num(rep.case1_T_coeff)},
           {"case1_W_coeff", num(rep.case1_W_coeff)}};
    emit(j, out_path, out);
    return 0;
  }

  if (c_solve->parsed()) {
    const auto grid = sf_solve.make_grid();
    const auto prm = sf_solve.params();
    const auto res = solver::minimize(prm, grid, sf_solve.options());
    json j{{"schema", "rtfw.solve-atom/1"},
           {"params",
            {{"Z", num(sf_solve.Z)},
             {"N", num(sf_solve.N)},
             {"lambda", num(sf_solve.lambda)},
             {"alpha_s", num(sf_solve.alpha_s)}}},
           {"grid", {{"n", grid.size()}, {"r_min", num(grid.r_min)}, {"r_max", num(grid.r_max)}}},
           {"result", result_json(res)}};
    emit(j, out_path, out);
    if (!profile_path.empty()) {
      std::ofstream f(profile_path);
      if (!f) throw std::runtime_error("cannot open profile file: " + profile_path);
      const auto phi = solver::hartree_potential_of(res.chi, grid, prm);
      f << "r,chi,p,rho,hartree_potential\n" << std::setprecision(17);
      const auto& T = sf::FTable::shared();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = T.inverse(res.chi[i]);
        f << grid.r[i] << "," << res.chi[i] << "," << p << ","
          << p * p * p / (3.0 * std::numbers::pi * std::numbers::pi) << "," << phi[i] << "\n";
      }
    }
    return res.converged ? 0 : 2;
  }

  if (c_ion->parsed()) {
    std::sort(ion_Z.begin(), ion_Z.end());
    std::vector<json> results(ion_Z.size());
    std::mutex mtx;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= ion_Z.size()) return;
        const double Z = ion_Z[i];
        SolveFlags local = sf_ion;
        local.Z = Z;
        try {
          const auto grid = local.make_grid();
          const auto scan = solver::find_max_ionization(Z, local.lambda, local.alpha_s,
                                                        grid, local.options(), ion_tol);
          json legs = json::array();
          bool all_conv = true;
          for (const auto& leg : scan.legs) {
            legs.push_back({{"N", num(leg.N)},
                            {"particle_number", num(leg.particle_number)},
                            {"bound", leg.bound},
                            {"converged", leg.converged}});
            all_conv = all_conv && leg.converged;
          }
          json entry{{"Z", num(Z)},
                     {"N_max", num(scan.N_max)},
                     {"N_max_over_Z", num(scan.N_max / Z)},
                     {"bisection_tol", num(scan.bisection_tol)},
                     {"legs_converged", all_conv},
                     {"legs", legs}};
          if (ion_analytic) {
            const auto rep = ionization::ionization_bound(Z);
            entry["analytic"] = {{"a", num(rep.a)},
                                 {"b", num(rep.b)},
                                 {"s_star", num(rep.s_star)},
                                 {"bound_coefficient", num(rep.bound_coefficient)},
                                 {"analytic_upper", num(rep.analytic_upper)}};
          }
          std::lock_guard<std::mutex> lk(mtx);
          results[i] = std::move(entry);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lk(mtx);
          results[i] = json{{"Z", num(Z)}, {"error", e.what()}};
          failed = true;
        }
      }
    };
    // warm up shared singletons before spawning workers
    (void)sf::FTable::shared();
    if (ion_analytic) (void)ionization::ionization_bound(ion_Z.front());
    const int nw = std::max(1, std::min<int>(jobs, int(ion_Z.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < nw; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    json j{{"schema", "rtfw.ionize/1"}, {"scans", results}};
    emit(j, out_path, out);
    return failed ? 2 : 0;
  }

  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(args, out, err);
  } catch (const std::domain_error& e) {
    err << json{{"error", {{"type", "validation"}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << json{{"error", {{"type", "validation"}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", {{"type", "numeric"}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  }
}

}  // namespace rtfw::cli
