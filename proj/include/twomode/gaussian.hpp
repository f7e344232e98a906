#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <utility>

#include "twomode/model.hpp"
#include "twomode/series.hpp"

namespace twomode {

/// Gaussian state: first moments on (x, p_x, y, p_y) plus the symmetric
/// covariance matrix sigma_ij = <{xi_i - <xi_i>, xi_j - <xi_j>}>/2.
struct GaussianState {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d sigma = 0.5 * Eigen::Matrix4d::Identity();
};

/// Linear generator of the Heisenberg flow on (x, p_x, y, p_y):
/// xdot = p_x, p_xdot = -w_x^2 x - g y, ydot = -p_y, p_ydot = w_y^2 y - g x.
inline Eigen::Matrix4d build_generator(const ModelParams& p) {
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  a(0, 1) = 1.0;
  a(1, 0) = -p.omega_x * p.omega_x;
  a(1, 2) = -p.g;
  a(2, 3) = -1.0;
  a(3, 0) = -p.g;
  a(3, 2) = p.omega_y * p.omega_y;
  return a;
}

struct Propagator {
  Eigen::Matrix4d s = Eigen::Matrix4d::Identity();
  double t = 0.0;
};

/// S(t) = exp(A t) by scaling-and-squaring (Pade); exists for every
/// stability class, including the defective one.
inline Propagator propagator(const Eigen::Matrix4d& generator, double t) {
  return {Eigen::Matrix4d((generator * t).exp()), t};
}

/// Coherent-or-displaced start: mean from the initial conditions, vacuum
/// covariance sigma(0) = I/2.
inline GaussianState initial_gaussian(const InitialConditions& init) {
  GaussianState st;
  st.mean << init.x0(), init.px0(), init.y0(), init.py0();
  st.sigma = 0.5 * Eigen::Matrix4d::Identity();
  return st;
}

/// mean -> S mean, sigma -> S sigma S^T (re-symmetrized).
inline GaussianState evolve(const GaussianState& st, const Propagator& prop) {
  GaussianState out;
  out.mean = prop.s * st.mean;
  const Eigen::Matrix4d raw = prop.s * st.sigma * prop.s.transpose();
  out.sigma = 0.5 * (raw + raw.transpose());
  return out;
}

/// 2x2 covariance block of one mode.
inline Eigen::Matrix2d reduced_covariance(const GaussianState& st, Mode mode) {
  const int off = mode == Mode::X ? 0 : 2;
  return st.sigma.block<2, 2>(off, off);
}

/// nu = sqrt(det sigma_mode); 1/2 for a pure mode.
inline double symplectic_eigenvalue(const Eigen::Matrix2d& sigma_mode) {
  const double det = sigma_mode(0, 0) * sigma_mode(1, 1) - sigma_mode(0, 1) * sigma_mode(1, 0);
  if (det < -1e-12)
    throw NegativeDeterminantError("reduced covariance has negative determinant");
  return std::sqrt(std::max(det, 0.0));
}

/// Von Neumann entropy of a single Gaussian mode,
/// S = (nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2), in nats.
/// Values of nu within kNuEpsilon of 1/2 count as pure (the 0 ln 0
/// convention); the logarithm is never evaluated closer to the branch
/// point than that.
inline double gaussian_entropy(double nu) {
  if (nu < 0.5 - 1e-10)
    throw EntropyDomainError("symplectic eigenvalue below 1/2");
  if (nu <= 0.5 + kNuEpsilon) return 0.0;
  const double p = nu + 0.5, q = nu - 0.5;
  return p * std::log(p) - q * std::log(q);
}

/// mu = Tr rho^2 = 1/(2 nu).
inline double purity(double nu) {
  if (nu < 0.5 - 1e-10)
    throw EntropyDomainError("symplectic eigenvalue below 1/2");
  return 1.0 / (2.0 * std::max(nu, 0.5));
}

/// Occupations <n> = (<x^2> + <p^2> - 1)/2 per mode. Raw values are
/// returned; the vacuum subtraction can leave them at -1e-16.
inline std::pair<double, double> occupations(const GaussianState& st) {
  const auto second_moment = [&](int i) {
    return st.sigma(i, i) + st.mean(i) * st.mean(i);
  };
  const double nx = 0.5 * (second_moment(0) + second_moment(1) - 1.0);
  const double ny = 0.5 * (second_moment(2) + second_moment(3) - 1.0);
  return {nx, ny};
}

/// Clamp for reporting: occupations within rounding of zero print as zero.
inline double clamp_occupation(double n) {
  return (n < 0.0 && n > -1e-10) ? 0.0 : n;
}

struct EnergyBreakdown {
  double e_x = 0.0;
  double e_y = 0.0;    // carries the Hamiltonian's negative sign
  double e_int = 0.0;
  double e_tot = 0.0;  // e_x + e_y + e_int by construction
};

/// Subsystem energies E_x = <p_x^2 + w_x^2 x^2>/2,
/// E_y = -<p_y^2 + w_y^2 y^2>/2 and E_int = g <x y>.
inline EnergyBreakdown effective_energies(const GaussianState& st, const ModelParams& p) {
  const auto second_moment = [&](int i) {
    return st.sigma(i, i) + st.mean(i) * st.mean(i);
  };
  EnergyBreakdown e;
  e.e_x = 0.5 * (second_moment(1) + p.omega_x * p.omega_x * second_moment(0));
  e.e_y = -0.5 * (second_moment(3) + p.omega_y * p.omega_y * second_moment(2));
  e.e_int = p.g * (st.sigma(0, 2) + st.mean(0) * st.mean(2));
  e.e_tot = e.e_x + e.e_y + e.e_int;
  return e;
}

/// Fluxes Phi = dE/dt from finite differences of the stored energy
/// channels.
inline std::pair<std::vector<double>, std::vector<double>> energy_flux(
    const ObservableSeries& series) {
  return {grid_derivative(series.grid, series.channel("e_x")),
          grid_derivative(series.grid, series.channel("e_y"))};
}

}  // namespace twomode
