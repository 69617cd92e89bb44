#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rtfw::sf {

/// Cached tabulation of F(t) = int_0^t f on log-spaced nodes with a C^1
/// piecewise-cubic Hermite interpolant (node derivatives are the exact f).
/// Node 0 is t = 0 with F = 0; below the first positive node the small-t
/// series is used, above max_node F is continued by direct quadrature from
/// the last node.
///
/// The table is immutable after construction and safe for concurrent reads.
class FTable {
 public:
  struct Params {
    std::size_t n_nodes = 8192;  // positive nodes, log-spaced
    double t_min = 1e-8;
    double t_max = 1e10;
  };

  explicit FTable(const Params& params);

  double F(double t) const;
  /// dF/dt of the interpolant itself (equals f at the nodes).
  double F_prime(double t) const;
  /// Inverse of the tabulated F: |F(result) - y| <= ~1e-12 max(1, y).
  double inverse(double y) const;

  double max_node() const { return params_.t_max; }
  int interpolation_order() const { return 3; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& F_values() const { return F_values_; }

  std::string to_json() const;
  static FTable from_json(const std::string& text);

  /// Process-wide shared instance, built once on first use. If the
  /// RTFW_CACHE_DIR environment variable is set, the table is loaded from /
  /// saved to "<dir>/ftable.json".
  static const FTable& shared();

 private:
  FTable() = default;
  void build_interpolant();
  std::size_t locate(double t) const;

  Params params_;
  std::vector<double> nodes_;     // nodes_[0] = 0
  std::vector<double> F_values_;  // F_values_[0] = 0
  std::vector<double> f_values_;  // exact derivatives at the nodes
  double log_t_min_ = 0, inv_step_ = 0;
};

/// Fast-path F and inverse through the shared table.
double F_fast(double t);
double F_inverse(double y);

}  // namespace rtfw::sf
