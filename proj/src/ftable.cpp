#include "rtfw/ftable.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rtfw/special_functions.hpp"

namespace rtfw::sf {

namespace {

using gk15 = boost::math::quadrature::gauss_kronrod<double, 15>;
using gk31 = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr int kSchemaVersion = 1;

double F_series(double t) {
  return (2.0 / 3.0) * t * std::sqrt(t) * (1.0 + (9.0 / 28.0) * t * t);
}

double f_series(double t) { return std::sqrt(t) * (1.0 + (3.0 / 4.0) * t * t); }

}  // namespace

FTable::FTable(const Params& params) : params_(params) {
  if (params_.n_nodes < 16 || !(params_.t_min > 0) || !(params_.t_max > params_.t_min))
    throw std::invalid_argument("FTable: bad parameters");
  const std::size_t n = params_.n_nodes;
  nodes_.resize(n + 1);
  F_values_.resize(n + 1);
  f_values_.resize(n + 1);
  nodes_[0] = 0.0;
  F_values_[0] = 0.0;
  f_values_[0] = 0.0;
  const double step = std::log(params_.t_max / params_.t_min) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    nodes_[i + 1] = params_.t_min * std::exp(double(i) * step);
  nodes_.back() = params_.t_max;

  // Cumulative integration, one non-adaptive GK15 panel per interval (the
  // intervals are ~0.5% wide in relative terms, far below panel resolution).
  long double acc = F_series(nodes_[1]);
  F_values_[1] = double(acc);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = nodes_[i], b = nodes_[i + 1];
    acc += gk15::integrate([](double s) { return f(s); }, a, b, 0);
    F_values_[i + 1] = double(acc);
  }
  for (std::size_t i = 1; i <= n; ++i) f_values_[i] = f(nodes_[i]);
  build_interpolant();
}

void FTable::build_interpolant() {
  log_t_min_ = std::log(params_.t_min);
  inv_step_ = double(params_.n_nodes - 1) / std::log(params_.t_max / params_.t_min);
}

std::size_t FTable::locate(double t) const {
  // index of the left node of the containing interval, in [1, n_nodes-1]
  const double u = (std::log(t) - log_t_min_) * inv_step_;
  auto i = std::size_t(std::max(0.0, std::floor(u))) + 1;
  i = std::min(i, params_.n_nodes - 1);
  while (i > 1 && t < nodes_[i]) --i;
  while (i < params_.n_nodes - 1 && t >= nodes_[i + 1]) ++i;
  return i;
}

double FTable::F(double t) const {
  if (!(t >= 0) || !std::isfinite(t)) throw std::domain_error("FTable::F: t must be >= 0");
  if (t < params_.t_min) return F_series(t);
  if (t >= params_.t_max) {
    if (t == params_.t_max) return F_values_.back();
    return F_values_.back() +
           gk31::integrate([](double s) { return f(s); }, params_.t_max, t, 30, 1e-13);
  }
  const std::size_t i = locate(t);
  const double h = nodes_[i + 1] - nodes_[i];
  const double x = (t - nodes_[i]) / h;
  const double y0 = F_values_[i], y1 = F_values_[i + 1];
  const double m0 = f_values_[i] * h, m1 = f_values_[i + 1] * h;
  const double x2 = x * x, x3 = x2 * x;
  return (2 * x3 - 3 * x2 + 1) * y0 + (x3 - 2 * x2 + x) * m0 +
         (-2 * x3 + 3 * x2) * y1 + (x3 - x2) * m1;
}

double FTable::F_prime(double t) const {
  if (!(t >= 0) || !std::isfinite(t)) throw std::domain_error("FTable::F_prime: t must be >= 0");
  if (t < params_.t_min) return f_series(t);
  if (t >= params_.t_max) return f(t);
  const std::size_t i = locate(t);
  const double h = nodes_[i + 1] - nodes_[i];
  const double x = (t - nodes_[i]) / h;
  const double y0 = F_values_[i], y1 = F_values_[i + 1];
  const double m0 = f_values_[i] * h, m1 = f_values_[i + 1] * h;
  const double x2 = x * x;
  return ((6 * x2 - 6 * x) * y0 + (3 * x2 - 4 * x + 1) * m0 +
          (-6 * x2 + 6 * x) * y1 + (3 * x2 - 2 * x) * m1) / h;
}

double FTable::inverse(double y) const {
  if (!(y >= 0) || !std::isfinite(y)) throw std::domain_error("FTable::inverse: y must be >= 0");
  if (y == 0) return 0.0;
  if (y < F_values_[1]) return std::pow(1.5 * y, 2.0 / 3.0);
  if (y > F_values_.back()) {
    // Rare: continue beyond the table with the exact bracketed Newton.
    return F_inverse_exact(y);
  }
  const auto it = std::upper_bound(F_values_.begin() + 1, F_values_.end(), y);
  std::size_t i = std::size_t(it - F_values_.begin()) - 1;
  i = std::min(std::max<std::size_t>(i, 1), params_.n_nodes - 1);
  double lo = nodes_[i], hi = nodes_[i + 1];
  const double flo = F_values_[i], fhi = F_values_[i + 1];
  double t = lo + (hi - lo) * (y - flo) / (fhi - flo);
  for (int k = 0; k < 32; ++k) {
    const double val = F(t) - y;
    if (std::abs(val) <= 4e-16 * std::max(1.0, y)) break;
    (val > 0 ? hi : lo) = t;
    const double d = F_prime(t);
    double next = d > 0 ? t - val / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t) break;
    t = next;
  }
  return t;
}

std::string FTable::to_json() const {
  nlohmann::json j;
  j["schema"] = "rtfw.ftable";
  j["version"] = kSchemaVersion;
  j["n_nodes"] = params_.n_nodes;
  j["t_min"] = params_.t_min;
  j["t_max"] = params_.t_max;
  j["interpolation_order"] = interpolation_order();
  j["max_node"] = max_node();
  j["F_values"] = F_values_;
  return j.dump();
}

FTable FTable::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("schema") != "rtfw.ftable" || j.at("version") != kSchemaVersion)
    throw std::runtime_error("FTable::from_json: unknown schema");
  FTable t;
  t.params_.n_nodes = j.at("n_nodes").get<std::size_t>();
  t.params_.t_min = j.at("t_min").get<double>();
  t.params_.t_max = j.at("t_max").get<double>();
  t.F_values_ = j.at("F_values").get<std::vector<double>>();
  if (t.F_values_.size() != t.params_.n_nodes + 1)
    throw std::runtime_error("FTable::from_json: size mismatch");
  const std::size_t n = t.params_.n_nodes;
  t.nodes_.resize(n + 1);
  t.f_values_.resize(n + 1);
  t.nodes_[0] = 0.0;
  t.f_values_[0] = 0.0;
  const double step = std::log(t.params_.t_max / t.params_.t_min) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    t.nodes_[i + 1] = t.params_.t_min * std::exp(double(i) * step);
  t.nodes_.back() = t.params_.t_max;
  for (std::size_t i = 1; i <= n; ++i) t.f_values_[i] = f(t.nodes_[i]);
  t.build_interpolant();
  return t;
}

const FTable& FTable::shared() {
  static FTable* instance = nullptr;
  static std::once_flag flag;
  std::call_once(flag, [] {
    const char* dir = std::getenv("RTFW_CACHE_DIR");
    if (dir && *dir) {
      const auto path = std::filesystem::path(dir) / "ftable.json";
      if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        try {
          instance = new FTable(from_json(ss.str()));
          return;
        } catch (const std::exception&) {
          // stale cache: fall through and rebuild
        }
      }
      instance = new FTable(Params{});
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      std::ofstream out(path);
      if (out) out << instance->to_json();
      return;
    }
    instance = new FTable(Params{});
  });
  return *instance;
}

double F_fast(double t) { return FTable::shared().F(t); }
double F_inverse(double y) { return FTable::shared().inverse(y); }

}  // namespace rtfw::sf
