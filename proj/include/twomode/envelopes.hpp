#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "twomode/errors.hpp"
#include "twomode/model.hpp"
#include "twomode/normal_modes.hpp"

namespace twomode {

/// Schwarzschild-like lapse with an exponential evaporation profile:
/// A(x) = 1 - 2 m0 / x, B(x) = exp(-k x) / x. A vanishes at the horizon
/// x = 2 m0.
struct MetricProfile {
  double m0 = 1.0;
  double k = 0.0;

  MetricProfile(double mass, double rate) : m0(mass), k(rate) {
    if (!(m0 > 0.0)) throw DomainError("metric mass parameter must be positive");
    if (k < 0.0) throw DomainError("evaporation rate must be non-negative");
  }
};

inline std::pair<double, double> metric_profiles(const MetricProfile& p, double x) {
  if (!(x > 0.0)) throw DomainError("metric profiles require x > 0");
  return {1.0 - 2.0 * p.m0 / x, std::exp(-p.k * x) / x};
}

/// Local quadratic potentials A = w_x^2 x^2 and B = w_y^2 y^2 + 2 g x y.
inline std::pair<double, double> quadratic_ansatz(const ModelParams& p, double x, double y) {
  return {p.omega_x * p.omega_x * x * x,
          p.omega_y * p.omega_y * y * y + 2.0 * p.g * x * y};
}

enum class InterpolantKind { MonotoneCubic, Linear };

/// Piecewise interpolant through (x_j, y_j) nodes. The default is
/// shape-preserving cubic Hermite (Fritsch-Carlson slopes): exact at the
/// nodes, C1 across them, and monotone wherever the data is.
class Interpolant {
 public:
  Interpolant(std::vector<double> xs, std::vector<double> ys,
              InterpolantKind kind = InterpolantKind::MonotoneCubic,
              bool allow_extrapolation = false)
      : kind_(kind), extrapolate_(allow_extrapolation) {
    if (xs.size() != ys.size()) throw ValidationError("node count mismatch");
    if (xs.size() < 2) throw ValidationError("interpolation needs at least 2 nodes");

    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    x_.reserve(xs.size());
    y_.reserve(xs.size());
    for (std::size_t i : order) {
      x_.push_back(xs[i]);
      y_.push_back(ys[i]);
    }
    for (std::size_t i = 0; i + 1 < x_.size(); ++i)
      if (!(x_[i + 1] > x_[i])) throw ValidationError("interpolation abscissae must be distinct");
    if (kind_ == InterpolantKind::MonotoneCubic) compute_slopes();
  }

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

  double operator()(double x) const {
    if (!extrapolate_ && (x < x_.front() || x > x_.back()))
      throw OutOfRangeError("interpolation point outside the node range");
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    if (kind_ == InterpolantKind::Linear)
      return y_[i] * (1.0 - t) + y_[i + 1] * t;
    // Cubic Hermite on the segment.
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
  }

 private:
  std::size_t segment(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
  }

  void compute_slopes() {
    const std::size_t n = x_.size();
    std::vector<double> d(n - 1), h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      d[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    m_.assign(n, 0.0);
    if (n == 2) {
      m_[0] = m_[1] = d[0];
      return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0) {
        m_[i] = 0.0;  // local extremum stays flat
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
      }
    }
    m_[0] = endpoint_slope(h[0], h[1], d[0], d[1]);
    m_[n - 1] = endpoint_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  }

  static double endpoint_slope(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return m;
  }

  InterpolantKind kind_;
  bool extrapolate_;
  std::vector<double> x_, y_, m_;
};

/// Smooth envelopes through the discrete modal amplitudes. The abscissa
/// of mode j defaults to its frequency Omega_j; there is no canonical
/// choice, so it stays configurable.
struct EnvelopeSpec {
  Interpolant a_env;
  Interpolant b_env;

  static EnvelopeSpec from_modes(const NormalModeData& modes, const ModalCoefficients& coeffs,
                                 InterpolantKind kind = InterpolantKind::MonotoneCubic,
                                 const std::vector<double>* abscissae = nullptr,
                                 bool allow_extrapolation = false) {
    std::vector<double> xs;
    if (abscissae) {
      xs = *abscissae;
    } else {
      if (!modes.stable())
        throw DefectiveModesError("default envelope abscissae need stable modes");
      xs = {modes.omega[0], modes.omega[1]};
    }
    return {Interpolant(xs, {coeffs.a[0], coeffs.a[1]}, kind, allow_extrapolation),
            Interpolant(xs, {coeffs.b[0], coeffs.b[1]}, kind, allow_extrapolation)};
  }
};

inline std::pair<double, double> envelope_interpolate(const EnvelopeSpec& spec, double x) {
  return {spec.a_env(x), spec.b_env(x)};
}

}  // namespace twomode
