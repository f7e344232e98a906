#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "twomode/gaussian.hpp"
#include "twomode/model.hpp"

namespace twomode {

/// Truncated product basis |n_x, n_y> with 0 <= n < n_cut per mode and
/// x-major flat index n_x * n_cut + n_y (partial trace over y is a
/// contiguous inner reduction).
struct FockBasis {
  int n_cut = 2;

  explicit FockBasis(int cutoff) : n_cut(cutoff) {
    if (cutoff < 2) throw CutoffTooSmallError("n_cut must be at least 2");
  }

  int dim() const { return n_cut * n_cut; }
  int index(int nx, int ny) const { return nx * n_cut + ny; }
  std::pair<int, int> levels(int flat) const { return {flat / n_cut, flat % n_cut}; }

  bool operator==(const FockBasis&) const = default;
};

/// Ladder-basis representation of the Hamiltonian.
///
/// Number: free part diagonal w_x(n_x + 1/2) - w_y(n_y + 1/2), coupling
///   (g/2)(a_x + a_x^dag)(a_y + a_y^dag) only — the conventional
///   oscillator-number form, exact at w = 1.
/// Quadrature: exact expansion of the position-space Hamiltonian in
///   a = (x + i p)/sqrt(2), which adds the intra-mode (a^2 + a^dag^2)
///   terms (w^2 - 1)/4 and shifts the diagonal to (w^2 + 1)/2 (n + 1/2).
///   This is the form that matches the covariance-matrix engine for
///   any frequency.
enum class FockForm { Number, Quadrature };

inline std::string to_string(FockForm f) {
  return f == FockForm::Number ? "number" : "quadrature";
}

struct FockHamiltonian {
  FockBasis basis;
  Eigen::MatrixXd h;
  FockForm form = FockForm::Number;
};

/// Assembles the dense symmetric Hamiltonian with hard truncation:
/// raising transitions that leave the basis are dropped.
inline FockHamiltonian build_hamiltonian(const ModelParams& p, int n_cut,
                                         FockForm form = FockForm::Number) {
  FockBasis basis(n_cut);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
  const double half_g = 0.5 * p.g;
  const double wx2 = p.omega_x * p.omega_x;
  const double wy2 = p.omega_y * p.omega_y;

  for (int nx = 0; nx < n_cut; ++nx) {
    for (int ny = 0; ny < n_cut; ++ny) {
      const int i = basis.index(nx, ny);
      if (form == FockForm::Number) {
        h(i, i) = p.omega_x * (nx + 0.5) - p.omega_y * (ny + 0.5);
      } else {
        h(i, i) = 0.5 * (wx2 + 1.0) * (nx + 0.5) - 0.5 * (wy2 + 1.0) * (ny + 0.5);
        const double cx = 0.25 * (wx2 - 1.0);
        const double cy = -0.25 * (wy2 - 1.0);
        if (nx + 2 < n_cut) {
          const double v = cx * std::sqrt(double(nx + 1) * double(nx + 2));
          h(basis.index(nx + 2, ny), i) += v;
          h(i, basis.index(nx + 2, ny)) += v;
        }
        if (ny + 2 < n_cut) {
          const double v = cy * std::sqrt(double(ny + 1) * double(ny + 2));
          h(basis.index(nx, ny + 2), i) += v;
          h(i, basis.index(nx, ny + 2)) += v;
        }
      }
      // Coupling: one quantum exchanged or created/destroyed in each mode.
      if (nx + 1 < n_cut && ny + 1 < n_cut) {
        const double v = half_g * std::sqrt(double(nx + 1) * double(ny + 1));
        h(basis.index(nx + 1, ny + 1), i) += v;
        h(i, basis.index(nx + 1, ny + 1)) += v;
      }
      if (nx + 1 < n_cut && ny - 1 >= 0) {
        const double v = half_g * std::sqrt(double(nx + 1) * double(ny));
        h(basis.index(nx + 1, ny - 1), i) += v;
        h(i, basis.index(nx + 1, ny - 1)) += v;
      }
    }
  }
  return {basis, std::move(h), form};
}

/// Complex coefficient vector over the truncated product basis.
struct FockState {
  FockBasis basis;
  Eigen::VectorXcd c;
};

struct CoherentPrep {
  FockState state;
  double truncated_weight = 0.0;  // probability mass outside the basis
  bool warning = false;           // weight above 1e-6
};

/// Coherent excitation of the x-mode, vacuum in y; optionally a coherent
/// displacement of y as well. Coefficients are renormalized after
/// truncation and the dropped weight is reported.
inline CoherentPrep coherent_initial(std::complex<double> alpha, const FockBasis& basis,
                                     std::complex<double> alpha_y = {0.0, 0.0}) {
  const int n = basis.n_cut;
  const auto mode_coeffs = [n](std::complex<double> a) {
    Eigen::VectorXcd c(n);
    c(0) = std::exp(-0.5 * std::norm(a));
    for (int k = 1; k < n; ++k) c(k) = c(k - 1) * a / std::sqrt(double(k));
    return c;
  };
  const Eigen::VectorXcd cx = mode_coeffs(alpha);
  const Eigen::VectorXcd cy = mode_coeffs(alpha_y);

  CoherentPrep prep{FockState{basis, Eigen::VectorXcd::Zero(basis.dim())}, 0.0, false};
  for (int nx = 0; nx < n; ++nx)
    for (int ny = 0; ny < n; ++ny)
      prep.state.c(basis.index(nx, ny)) = cx(nx) * cy(ny);

  const double kept = prep.state.c.squaredNorm();
  prep.truncated_weight = std::max(0.0, 1.0 - kept);
  prep.warning = prep.truncated_weight > 1e-6;
  prep.state.c /= std::sqrt(kept);
  return prep;
}

/// One-time real-symmetric eigendecomposition H = U E U^T, reused over a
/// whole time grid; evolution through it is exactly unitary up to float
/// error.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const FockHamiltonian& h) : basis_(h.basis) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.h);
    if (solver.info() != Eigen::Success)
      throw EigendecompositionError("symmetric eigendecomposition failed");
    u_ = solver.eigenvectors();
    e_ = solver.eigenvalues();
  }

  const FockBasis& basis() const { return basis_; }
  const Eigen::VectorXd& eigenvalues() const { return e_; }

  /// c(t) = U exp(-i E t) U^T c0.
  FockState at(const FockState& psi0, double t) const {
    if (!(psi0.basis == basis_))
      throw ValidationError("state and propagator bases differ");
    const Eigen::VectorXcd modal = u_.transpose() * psi0.c;
    Eigen::VectorXcd phased(modal.size());
    for (Eigen::Index k = 0; k < modal.size(); ++k)
      phased(k) = std::polar(1.0, -e_(k) * t) * modal(k);
    return {basis_, u_ * phased};
  }

 private:
  FockBasis basis_;
  Eigen::MatrixXd u_;
  Eigen::VectorXd e_;
};

inline FockState evolve(const FockHamiltonian& h, const FockState& psi0, double t) {
  return SpectralPropagator(h).at(psi0, t);
}

/// Marginal level populations (P_nx, P_ny); each sums to one.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> populations(const FockState& psi) {
  const int n = psi.basis.n_cut;
  Eigen::VectorXd px = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd py = Eigen::VectorXd::Zero(n);
  for (int nx = 0; nx < n; ++nx)
    for (int ny = 0; ny < n; ++ny) {
      const double w = std::norm(psi.c(psi.basis.index(nx, ny)));
      px(nx) += w;
      py(ny) += w;
    }
  return {px, py};
}

struct FockExpectations {
  double n_x = 0.0, n_y = 0.0;
  double q = 0.0;       // n_x + n_y
  double d = 0.0;       // n_x - n_y
  double energy = 0.0;  // <H>
};

inline FockExpectations expectations(const FockState& psi, const FockHamiltonian& h) {
  const auto [px, py] = populations(psi);
  FockExpectations e;
  for (int k = 0; k < psi.basis.n_cut; ++k) {
    e.n_x += k * px(k);
    e.n_y += k * py(k);
  }
  e.q = e.n_x + e.n_y;
  e.d = e.n_x - e.n_y;
  e.energy = std::real(psi.c.dot(h.h * psi.c));
  return e;
}

struct ReducedDensity {
  Eigen::MatrixXcd rho;
  Mode mode = Mode::X;
};

/// Partial trace over the complementary mode:
/// rho_x[m, n] = sum_k C(m, k) conj(C(n, k)).
inline ReducedDensity reduced_density(const FockState& psi, Mode mode) {
  const int n = psi.basis.n_cut;
  using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const CMat> c(psi.c.data(), n, n);
  ReducedDensity rd;
  rd.mode = mode;
  if (mode == Mode::X)
    rd.rho = c * c.adjoint();
  else
    rd.rho = c.transpose() * c.conjugate();
  return rd;
}

/// S = -sum lambda ln lambda over the spectrum of the reduced state.
/// Weights below kLambdaEpsilon contribute nothing; negatives within
/// -1e-10 are rounding and clamp to zero.
inline double vn_entropy(const ReducedDensity& rd) {
  const double trace = rd.rho.trace().real();
  if (std::abs(trace - 1.0) > 1e-8)
    throw InvalidDensityError("reduced density trace deviates from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rd.rho);
  if (solver.info() != Eigen::Success)
    throw EigendecompositionError("Hermitian eigendecomposition failed");
  double s = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double lam = solver.eigenvalues()(k);
    if (lam < -1e-10)
      throw InvalidDensityError("reduced density has a negative eigenvalue");
    if (lam > kLambdaEpsilon) s -= lam * std::log(lam);
  }
  return s;
}

/// Stacks per-time population rows into a (time x n_x) matrix.
inline Eigen::MatrixXd heatmap(const std::vector<Eigen::VectorXd>& rows) {
  if (rows.empty()) throw ValidationError("heatmap needs at least one row");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw ValidationError("heatmap row size mismatch");
    m.row(static_cast<Eigen::Index>(i)) = rows[i];
  }
  return m;
}

/// First and second ladder-operator moments of a two-mode state, enough
/// to reconstruct all quadrature means and covariances.
struct LadderMoments {
  std::complex<double> a_x{0.0, 0.0}, a_y{0.0, 0.0};
  std::complex<double> a_x_sq{0.0, 0.0}, a_y_sq{0.0, 0.0};
  std::complex<double> ax_ay{0.0, 0.0};   // <a_x a_y>
  std::complex<double> axd_ay{0.0, 0.0};  // <a_x^dag a_y>
  double n_x = 0.0, n_y = 0.0;
};

inline LadderMoments ladder_moments(const FockState& psi) {
  const int n = psi.basis.n_cut;
  const auto& c = psi.c;
  const auto idx = [&](int nx, int ny) { return psi.basis.index(nx, ny); };
  LadderMoments m;
  for (int nx = 0; nx < n; ++nx)
    for (int ny = 0; ny < n; ++ny) {
      const std::complex<double> cc = std::conj(c(idx(nx, ny)));
      const double w = std::norm(c(idx(nx, ny)));
      m.n_x += nx * w;
      m.n_y += ny * w;
      if (nx + 1 < n) m.a_x += cc * std::sqrt(double(nx + 1)) * c(idx(nx + 1, ny));
      if (ny + 1 < n) m.a_y += cc * std::sqrt(double(ny + 1)) * c(idx(nx, ny + 1));
      if (nx + 2 < n)
        m.a_x_sq += cc * std::sqrt(double(nx + 1) * double(nx + 2)) * c(idx(nx + 2, ny));
      if (ny + 2 < n)
        m.a_y_sq += cc * std::sqrt(double(ny + 1) * double(ny + 2)) * c(idx(nx, ny + 2));
      if (nx + 1 < n && ny + 1 < n)
        m.ax_ay += cc * std::sqrt(double(nx + 1) * double(ny + 1)) * c(idx(nx + 1, ny + 1));
      if (nx - 1 >= 0 && ny + 1 < n)
        m.axd_ay += cc * std::sqrt(double(nx) * double(ny + 1)) * c(idx(nx - 1, ny + 1));
    }
  return m;
}

/// <x y> = Re<a_x a_y> + Re<a_x^dag a_y>.
inline double xy_moment(const LadderMoments& m) {
  return m.ax_ay.real() + m.axd_ay.real();
}

/// Quadrature mean (⟨x⟩, ⟨p⟩) of one mode.
inline Eigen::Vector2d quadrature_mean(const LadderMoments& m, Mode mode) {
  const std::complex<double> a = mode == Mode::X ? m.a_x : m.a_y;
  const double s = std::sqrt(2.0);
  return {s * a.real(), s * a.imag()};
}

/// Reduced 2x2 quadrature covariance of one mode from ladder moments:
/// <x^2> = Re<a^2> + n + 1/2, <p^2> = -Re<a^2> + n + 1/2,
/// <xp + px>/2 = Im<a^2>.
inline Eigen::Matrix2d quadrature_covariance(const LadderMoments& m, Mode mode) {
  const std::complex<double> a2 = mode == Mode::X ? m.a_x_sq : m.a_y_sq;
  const double n = mode == Mode::X ? m.n_x : m.n_y;
  const Eigen::Vector2d mean = quadrature_mean(m, mode);
  Eigen::Matrix2d cov;
  cov(0, 0) = a2.real() + n + 0.5 - mean(0) * mean(0);
  cov(1, 1) = -a2.real() + n + 0.5 - mean(1) * mean(1);
  cov(0, 1) = cov(1, 0) = a2.imag() - mean(0) * mean(1);
  return cov;
}

/// Energy split of the Hamiltonian form actually evolved, so that
/// e_tot = <H> is conserved exactly by the spectral evolution.
inline EnergyBreakdown fock_energies(const LadderMoments& m, const ModelParams& p,
                                     FockForm form) {
  EnergyBreakdown e;
  if (form == FockForm::Number) {
    e.e_x = p.omega_x * (m.n_x + 0.5);
    e.e_y = -p.omega_y * (m.n_y + 0.5);
  } else {
    const double wx2 = p.omega_x * p.omega_x;
    const double wy2 = p.omega_y * p.omega_y;
    const double x2 = m.a_x_sq.real() + m.n_x + 0.5;
    const double px2 = -m.a_x_sq.real() + m.n_x + 0.5;
    const double y2 = m.a_y_sq.real() + m.n_y + 0.5;
    const double py2 = -m.a_y_sq.real() + m.n_y + 0.5;
    e.e_x = 0.5 * (px2 + wx2 * x2);
    e.e_y = -0.5 * (py2 + wy2 * y2);
  }
  e.e_int = p.g * xy_moment(m);
  e.e_tot = e.e_x + e.e_y + e.e_int;
  return e;
}

}  // namespace twomode
