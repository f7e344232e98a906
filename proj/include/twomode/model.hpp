#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "twomode/errors.hpp"

namespace twomode {

/// Degeneracy tolerance for the discriminant, scaled dimensionally by
/// max(1, (omega_x^2 + omega_y^2)^2).
inline constexpr double kDegeneracyTol = 1e-12;

/// Guard width around the pure-state symplectic eigenvalue nu = 1/2.
inline constexpr double kNuEpsilon = 1e-12;

/// Eigenvalues of a reduced density matrix below this weight are treated
/// as numerically zero in entropy sums.
inline constexpr double kLambdaEpsilon = 1e-14;

enum class Mode { X, Y };

/// Frequencies and coupling of the two-oscillator Hamiltonian
/// H = (p_x^2 + w_x^2 x^2)/2 - (p_y^2 + w_y^2 y^2)/2 + g x y.
/// The y-sector carries the opposite sign; everything is dimensionless
/// (hbar = 1, unit mass).
struct ModelParams {
  double omega_x = 1.0;
  double omega_y = 1.0;
  double g = 0.0;

  /// Discriminant (w_x^2 - w_y^2)^2 - 4 g^2 separating oscillatory from
  /// unstable dynamics.
  double discriminant() const {
    const double d = omega_x * omega_x - omega_y * omega_y;
    return d * d - 4.0 * g * g;
  }

  /// Scale used for the degeneracy comparison.
  double degeneracy_scale() const {
    const double s = omega_x * omega_x + omega_y * omega_y;
    return std::max(1.0, s * s);
  }

  bool operator==(const ModelParams&) const = default;
};

/// Checks positivity and finiteness of the model parameters.
inline ModelParams validate(const ModelParams& p) {
  if (!std::isfinite(p.omega_x) || !std::isfinite(p.omega_y) || !std::isfinite(p.g))
    throw NonFiniteInputError("model parameters must be finite");
  if (p.omega_x <= 0.0 || p.omega_y <= 0.0)
    throw NonPositiveFrequencyError("omega_x and omega_y must be > 0");
  return p;
}

enum class Stability { Stable, DegenerateDefective, UnstableComplex };

struct StabilityClass {
  Stability kind = Stability::Stable;
  /// |Im Omega| of the complex secular root; 0 unless UnstableComplex.
  double growth_rate = 0.0;
};

/// Classifies the dynamics by the sign of the discriminant. The
/// classification is even in g.
inline StabilityClass classify_stability(const ModelParams& p) {
  const double delta = p.discriminant();
  const double tol = kDegeneracyTol * p.degeneracy_scale();
  if (std::abs(delta) <= tol) return {Stability::DegenerateDefective, 0.0};
  if (delta > 0.0) return {Stability::Stable, 0.0};
  // Complex-conjugate pair Omega^2 = (w_x^2 + w_y^2)/2 +- i sqrt(-delta)/2.
  const std::complex<double> omega_sq(
      0.5 * (p.omega_x * p.omega_x + p.omega_y * p.omega_y),
      0.5 * std::sqrt(-delta));
  return {Stability::UnstableComplex, std::abs(std::sqrt(omega_sq).imag())};
}

/// Initial data: a coherent displacement of the x-mode (y in vacuum), or
/// an explicit phase-space point. The coherent view maps
/// alpha -> (x0, p_x0) = sqrt(2) (Re alpha, Im alpha). The two views are
/// mutually exclusive per run; the factories below enforce that.
class InitialConditions {
 public:
  static InitialConditions coherent(std::complex<double> alpha) {
    InitialConditions ic;
    ic.alpha_ = alpha;
    ic.classical_override_ = false;
    const double s = std::sqrt(2.0);
    ic.x0_ = s * alpha.real();
    ic.px0_ = s * alpha.imag();
    ic.y0_ = 0.0;
    ic.py0_ = 0.0;
    return ic;
  }

  static InitialConditions classical(double x0, double px0, double y0, double py0) {
    InitialConditions ic;
    ic.alpha_ = {0.0, 0.0};
    ic.classical_override_ = true;
    ic.x0_ = x0;
    ic.px0_ = px0;
    ic.y0_ = y0;
    ic.py0_ = py0;
    return ic;
  }

  bool classical_override() const { return classical_override_; }
  std::complex<double> alpha() const { return alpha_; }

  double x0() const { return x0_; }
  double px0() const { return px0_; }
  double y0() const { return y0_; }
  double py0() const { return py0_; }

  // Velocities from Hamilton's equations: xdot = p_x, ydot = -p_y.
  double xdot0() const { return px0_; }
  double ydot0() const { return -py0_; }

  bool operator==(const InitialConditions&) const = default;

 private:
  InitialConditions() = default;
  std::complex<double> alpha_{0.0, 0.0};
  bool classical_override_ = false;
  double x0_ = 0.0, px0_ = 0.0, y0_ = 0.0, py0_ = 0.0;
};

}  // namespace twomode
