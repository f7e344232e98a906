#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "twomode/model.hpp"
#include "twomode/series.hpp"

namespace twomode {

/// Standard symplectic form on (x, p_x, y, p_y).
inline Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j(0, 1) = 1.0; j(1, 0) = -1.0;
  j(2, 3) = 1.0; j(3, 2) = -1.0;
  return j;
}

/// Secular roots and eigenvectors of the coupled linear system.
///
/// Roots of (Omega^2 - w_x^2)(Omega^2 - w_y^2) + g^2 = 0, ordered by
/// descending real part. Eigenvectors use the normalization X_j = 1 with
/// Y_j = (Omega_j^2 - w_x^2)/g; for g = 0 they are the canonical basis
/// vectors. For UnstableComplex parameters only omega_sq (a conjugate
/// pair) is meaningful; omega and the eigenvector fields are NaN.
struct NormalModeData {
  std::array<std::complex<double>, 2> omega_sq;
  std::array<double, 2> omega;   // +sqrt(omega_sq), Stable only
  std::array<double, 2> xvec;    // X_j
  std::array<double, 2> yvec;    // Y_j
  double det_v = 0.0;            // X_1 Y_2 - X_2 Y_1
  StabilityClass stability;

  bool stable() const { return stability.kind == Stability::Stable; }
};

inline NormalModeData solve_secular(const ModelParams& p) {
  const StabilityClass sc = classify_stability(p);
  if (sc.kind == Stability::DegenerateDefective)
    throw DefectiveModesError(
        "degenerate discriminant: modal decomposition is defective, use the "
        "matrix-exponential propagator");

  NormalModeData m;
  m.stability = sc;
  const double wx2 = p.omega_x * p.omega_x;
  const double wy2 = p.omega_y * p.omega_y;
  const double half_sum = 0.5 * (wx2 + wy2);
  const double delta = p.discriminant();

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (sc.kind == Stability::UnstableComplex) {
    const double im = 0.5 * std::sqrt(-delta);
    m.omega_sq = {std::complex<double>(half_sum, im), std::complex<double>(half_sum, -im)};
    m.omega = {nan, nan};
    m.xvec = {nan, nan};
    m.yvec = {nan, nan};
    m.det_v = nan;
    return m;
  }

  const double half_root = 0.5 * std::sqrt(delta);
  const double o1 = half_sum + half_root;
  const double o2 = half_sum - half_root;
  m.omega_sq = {o1, o2};
  m.omega = {std::sqrt(o1), std::sqrt(o2)};

  if (p.g == 0.0) {
    // Uncoupled limit: modes are the bare oscillators, ordered by frequency.
    if (wx2 >= wy2) {
      m.xvec = {1.0, 0.0};
      m.yvec = {0.0, 1.0};
    } else {
      m.xvec = {0.0, 1.0};
      m.yvec = {1.0, 0.0};
    }
  } else {
    m.xvec = {1.0, 1.0};
    m.yvec = {(o1 - wx2) / p.g, (o2 - wx2) / p.g};
  }
  m.det_v = m.xvec[0] * m.yvec[1] - m.xvec[1] * m.yvec[0];
  return m;
}

/// Cosine/sine amplitudes of the two normal modes.
struct ModalCoefficients {
  std::array<double, 2> a{0.0, 0.0};
  std::array<double, 2> b{0.0, 0.0};
};

/// Projects initial phase-space data onto the modal basis:
/// A = V^-1 (x0, y0)^T and B = Omega^-1 V^-1 (xdot0, ydot0)^T, where the
/// initial velocities follow Hamilton's equations (ydot = -p_y).
inline ModalCoefficients project_initial(const NormalModeData& m,
                                         const InitialConditions& init) {
  if (!m.stable())
    throw DefectiveModesError("modal projection requires stable modes");
  if (std::abs(m.det_v) <= kDegeneracyTol)
    throw DegenerateEigenvectorsError("modal matrix is numerically singular");

  const double x0 = init.x0(), y0 = init.y0();
  const double xd0 = init.xdot0(), yd0 = init.ydot0();
  const auto& x = m.xvec;
  const auto& y = m.yvec;
  const double inv_det = 1.0 / m.det_v;

  ModalCoefficients c;
  c.a[0] = (y[1] * x0 - x[1] * y0) * inv_det;
  c.a[1] = (-y[0] * x0 + x[0] * y0) * inv_det;
  c.b[0] = (y[1] * xd0 - x[1] * yd0) * inv_det / m.omega[0];
  c.b[1] = (-y[0] * xd0 + x[0] * yd0) * inv_det / m.omega[1];
  return c;
}

struct TrajectoryPoint {
  double x = 0.0, y = 0.0, xdot = 0.0, ydot = 0.0;
};

/// Superposition of the two normal modes at time t.
inline TrajectoryPoint classical_trajectory(const NormalModeData& m,
                                            const ModalCoefficients& c, double t) {
  if (!m.stable())
    throw DefectiveModesError("classical trajectory requires stable modes");
  TrajectoryPoint out;
  for (int j = 0; j < 2; ++j) {
    const double w = m.omega[static_cast<std::size_t>(j)];
    const double cj = std::cos(w * t), sj = std::sin(w * t);
    const double q = c.a[static_cast<std::size_t>(j)] * cj + c.b[static_cast<std::size_t>(j)] * sj;
    const double qdot = w * (-c.a[static_cast<std::size_t>(j)] * sj + c.b[static_cast<std::size_t>(j)] * cj);
    out.x += q * m.xvec[static_cast<std::size_t>(j)];
    out.y += q * m.yvec[static_cast<std::size_t>(j)];
    out.xdot += qdot * m.xvec[static_cast<std::size_t>(j)];
    out.ydot += qdot * m.yvec[static_cast<std::size_t>(j)];
  }
  return out;
}

/// First-moment occupation of the x-mode, <n_x> = (x^2 + p_x^2)/2 with
/// p_x = xdot. Excludes the vacuum-variance contribution.
inline double occupation_closed_form(const NormalModeData& m,
                                     const ModalCoefficients& c, double t) {
  const TrajectoryPoint p = classical_trajectory(m, c, t);
  return 0.5 * (p.x * p.x + p.xdot * p.xdot);
}

/// Weak-coupling beat approximation |alpha|^2 cos^2(dOmega t / 2). A
/// diagnostic envelope, not an exact observable.
inline double beat_envelope(const ModelParams& p, std::complex<double> alpha, double t) {
  const NormalModeData m = solve_secular(p);
  if (!m.stable())
    throw DefectiveModesError("beat envelope requires stable modes");
  const double d_omega = std::abs(m.omega[0] - m.omega[1]);
  const double c = std::cos(0.5 * d_omega * t);
  return std::norm(alpha) * c * c;
}

struct PowerLawFit {
  double kappa = 0.0;
  double exponent = 0.0;
  std::size_t samples = 0;
};

/// Suggested fit window: inside the first oscillation, where the
/// quadratic term dominates.
inline double default_fit_window(const ModelParams& p) {
  return 0.3 / std::max(p.omega_x, p.omega_y);
}

/// Least-squares fit of log(value) against log(g t) over 0 < t <= window,
/// giving value ~ kappa (g t)^exponent.
inline PowerLawFit short_time_fit(const ObservableSeries& series,
                                  const std::string& channel, double window,
                                  double coupling) {
  const auto& values = series.channel(channel);
  if (!(coupling > 0.0))
    throw NonPositiveValuesError("short-time fit requires a positive coupling");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < series.grid.size(); ++i) {
    const double t = series.grid[i];
    if (t <= 0.0 || t > window) continue;
    const double v = values[i];
    if (!(v > 0.0))
      throw NonPositiveValuesError("channel " + channel + " not positive on the fit window");
    const double lx = std::log(coupling * t);
    const double ly = std::log(v);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++n;
  }
  if (n < 8)
    throw InsufficientSamplesError("short-time fit needs at least 8 samples in the window");

  const double dn = static_cast<double>(n);
  const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / dn;
  return {std::exp(intercept), slope, n};
}

/// Closed-form symplectic propagator assembled from the modal solution:
/// S(t) = L diag(R(Omega_1 t), R(Omega_2 t)) L^-1 with per-mode phase
/// coordinates (q_j, qdot_j / Omega_j).
inline Eigen::Matrix4d modal_propagator(const NormalModeData& m, double t) {
  if (!m.stable())
    throw DefectiveModesError("modal propagator requires stable modes");
  Eigen::Matrix4d l = Eigen::Matrix4d::Zero();
  l(0, 0) = m.xvec[0]; l(0, 2) = m.xvec[1];
  l(1, 1) = m.omega[0] * m.xvec[0]; l(1, 3) = m.omega[1] * m.xvec[1];
  l(2, 0) = m.yvec[0]; l(2, 2) = m.yvec[1];
  l(3, 1) = -m.omega[0] * m.yvec[0]; l(3, 3) = -m.omega[1] * m.yvec[1];

  Eigen::Matrix4d rot = Eigen::Matrix4d::Zero();
  for (int j = 0; j < 2; ++j) {
    const double th = m.omega[static_cast<std::size_t>(j)] * t;
    const double c = std::cos(th), s = std::sin(th);
    rot(2 * j, 2 * j) = c; rot(2 * j, 2 * j + 1) = s;
    rot(2 * j + 1, 2 * j) = -s; rot(2 * j + 1, 2 * j + 1) = c;
  }
  return l * rot * l.inverse();
}

struct BogoliubovBlocks {
  Eigen::Matrix2cd u;
  Eigen::Matrix2cd v;
};

/// Rewrites a real symplectic phase-space propagator in the ladder basis
/// (a_x, a_y, a_x^dag, a_y^dag) with a = (x + i p)/sqrt(2), and returns
/// the (U, V) blocks of the resulting Bogoliubov matrix.
inline BogoliubovBlocks bogoliubov_blocks(const Eigen::Matrix4d& s) {
  const Eigen::Matrix4d j = symplectic_form();
  const double residual = (s.transpose() * j * s - j).cwiseAbs().maxCoeff();
  if (residual > 1e-8)
    throw NotSymplecticError("propagator is not symplectic (residual " +
                             std::to_string(residual) + ")");

  using C = std::complex<double>;
  const C i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4cd t = Eigen::Matrix4cd::Zero();
  t(0, 0) = r; t(0, 1) = r * i;        // a_x
  t(1, 2) = r; t(1, 3) = r * i;        // a_y
  t(2, 0) = r; t(2, 1) = -r * i;       // a_x^dag
  t(3, 2) = r; t(3, 3) = -r * i;       // a_y^dag

  Eigen::Matrix4cd tinv = Eigen::Matrix4cd::Zero();
  tinv(0, 0) = r; tinv(0, 2) = r;      // x
  tinv(1, 0) = -r * i; tinv(1, 2) = r * i;
  tinv(2, 1) = r; tinv(2, 3) = r;      // y
  tinv(3, 1) = -r * i; tinv(3, 3) = r * i;

  const Eigen::Matrix4cd b = t * s.cast<C>() * tinv;
  BogoliubovBlocks out;
  out.u = b.topLeftCorner<2, 2>();
  out.v = b.topRightCorner<2, 2>();
  return out;
}

}  // namespace twomode
