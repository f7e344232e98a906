#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "twomode/errors.hpp"

namespace twomode {

/// Uniform time grid with named observable channels and an optional
/// per-level population matrix (rows: time, columns: n_x).
struct ObservableSeries {
  std::vector<double> grid;
  std::map<std::string, std::vector<double>> channels;
  Eigen::MatrixXd p_nx;  // empty when no population matrix was produced

  bool has_heatmap() const { return p_nx.size() > 0; }
  std::size_t size() const { return grid.size(); }

  double dt() const {
    if (grid.size() < 2) throw GridTooShortError("grid needs at least 2 samples");
    return (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  }

  bool has_channel(const std::string& name) const { return channels.count(name) > 0; }

  const std::vector<double>& channel(const std::string& name) const {
    auto it = channels.find(name);
    if (it == channels.end()) throw ValidationError("unknown channel: " + name);
    return it->second;
  }

  void add_channel(const std::string& name, std::vector<double> values) {
    if (values.size() != grid.size())
      throw ValidationError("channel " + name + " length does not match grid");
    channels[name] = std::move(values);
  }

  /// Grid strictly increasing and uniform to 1e-12 relative; channels all
  /// of grid length.
  void check() const {
    if (grid.size() < 2) throw ValidationError("series grid too short");
    const double step = dt();
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double h = grid[i + 1] - grid[i];
      if (h <= 0.0) throw ValidationError("grid not strictly increasing");
      if (std::abs(h - step) > 1e-12 * std::max(1.0, std::abs(step)))
        throw ValidationError("grid not uniform");
    }
    for (const auto& [name, v] : channels)
      if (v.size() != grid.size())
        throw ValidationError("channel " + name + " length mismatch");
    if (has_heatmap() && static_cast<std::size_t>(p_nx.rows()) != grid.size())
      throw ValidationError("population matrix row count mismatch");
  }
};

/// Uniform grid of n points on [t0, t1].
inline std::vector<double> make_grid(double t0, double t1, int n) {
  if (n < 2) throw ValidationError("grid needs at least 2 samples");
  if (!(t1 > t0)) throw ValidationError("t_end must exceed t_start");
  std::vector<double> g(static_cast<std::size_t>(n));
  const double dt = (t1 - t0) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = t0 + dt * i;
  g.back() = t1;
  return g;
}

/// Second-order finite-difference derivative on a uniform grid: central
/// differences in the interior, one-sided three-point stencils at the ends.
inline std::vector<double> grid_derivative(const std::vector<double>& grid,
                                           const std::vector<double>& values) {
  if (grid.size() < 3) throw GridTooShortError("derivative needs at least 3 samples");
  if (values.size() != grid.size()) throw ValidationError("derivative length mismatch");
  const std::size_t n = grid.size();
  const double h = (grid.back() - grid.front()) / static_cast<double>(n - 1);
  std::vector<double> d(n);
  d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
  return d;
}

}  // namespace twomode
