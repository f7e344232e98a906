// Acceptance suite: one numbered criterion per section, one PASS/FAIL
// line per sub-check, measured values included. Run with a criterion
// number (1..11) to check a single one, or no arguments for the full set.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "twomode/twomode.hpp"

using namespace twomode;

namespace {

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

struct Checker {
  int criterion = 0;
  bool ok = true;
  void check(const std::string& label, bool pass, const std::string& detail) {
    std::printf("%s  criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                label.c_str(), detail.c_str());
    ok = ok && pass;
  }
};

ModelParams random_stable(std::mt19937& rng) {
  std::uniform_real_distribution<double> omega(0.5, 2.0);
  std::uniform_real_distribution<double> frac(0.1, 0.9);
  for (;;) {
    const double wx = omega(rng), wy = omega(rng);
    const double span = std::abs(wx * wx - wy * wy);
    if (span < 0.1) continue;
    return validate({wx, wy, 0.45 * frac(rng) * span});
  }
}

double max_drift(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x - v.front()));
  return m;
}

double sup_dev(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

const ModelParams kTable1Params = validate({1.0, 0.8, 0.15});
const ModelParams kDefaultParams = validate({1.0, 0.8, 0.1});
const InitialConditions kAlphaOne = InitialConditions::coherent({1.0, 0.0});

// 1. Modal table reproduction for the displacement-only initial data.
bool criterion1() {
  Checker c{1};
  const auto t0 = std::chrono::steady_clock::now();
  const NormalModeData m = solve_secular(kTable1Params);
  const ModalCoefficients mc = project_initial(m, kAlphaOne);
  const auto t1 = std::chrono::steady_clock::now();

  const auto near = [&](const char* label, double got, double want) {
    c.check(fmt("table-1 %s", label), std::abs(got - want) <= 5e-6,
            fmt("got %.7f want %.6f", got, want));
  };
  near("Omega_1^2", m.omega_sq[0].real(), 0.919499);
  near("Omega_2^2", m.omega_sq[1].real(), 0.720501);
  near("Y_1", m.yvec[0], -0.536675);
  near("Y_2", m.yvec[1], -1.863325);
  near("A_1", mc.a[0], 1.986311);
  near("A_2", mc.a[1], -0.572098);
  near("det V", m.det_v, -1.32665);

  const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  c.check("modal solve runtime", ms < 1.0, fmt("%.4f ms", ms));
  return c.ok;
}

// 2. Sine coefficients with an initial velocity.
bool criterion2() {
  Checker c{2};
  const NormalModeData m = solve_secular(kTable1Params);
  const ModalCoefficients mc =
      project_initial(m, InitialConditions::classical(std::sqrt(2.0), 0.5, 0.0, 0.0));
  c.check("table-2 B_1", std::abs(mc.b[0] - 0.732364) <= 5e-6, fmt("got %.7f", mc.b[0]));
  c.check("table-2 B_2", std::abs(mc.b[1] - (-0.238291)) <= 5e-6, fmt("got %.7f", mc.b[1]));
  return c.ok;
}

// 3. Summary statistics of the spectral run.
bool criterion3() {
  Checker c{3};
  const auto t0 = std::chrono::steady_clock::now();
  const ObservableSeries s =
      fock_series(kDefaultParams, kAlphaOne, 8, FockForm::Number, 0.0, 50.0, 801);
  const auto t1 = std::chrono::steady_clock::now();

  double mean_nx = 0, amp_nx = 0, mean_ny = 0, amp_ny = 0, mean_sx = 0, amp_sx = 0;
  for (const auto& r : summarize(s)) {
    if (r.channel == "n_x") { mean_nx = r.mean; amp_nx = r.amplitude; }
    if (r.channel == "n_y") { mean_ny = r.mean; amp_ny = r.amplitude; }
    if (r.channel == "s_x") { mean_sx = r.mean; amp_sx = r.amplitude; }
  }
  c.check("mean n_x = 0.98 +- 0.15", std::abs(mean_nx - 0.98) <= 0.15, fmt("got %.4f", mean_nx));
  c.check("mean n_y = 0.99 +- 0.15", std::abs(mean_ny - 0.99) <= 0.15, fmt("got %.4f", mean_ny));
  c.check("mean S_x = 0.42 +- 0.10", std::abs(mean_sx - 0.42) <= 0.10, fmt("got %.4f", mean_sx));
  c.check("amp n_x = 0.22 +- 0.10", std::abs(amp_nx - 0.22) <= 0.10, fmt("got %.4f", amp_nx));
  c.check("amp n_y = 0.22 +- 0.10", std::abs(amp_ny - 0.22) <= 0.10, fmt("got %.4f", amp_ny));
  c.check("amp S_x = 0.28 +- 0.10", std::abs(amp_sx - 0.28) <= 0.10, fmt("got %.4f", amp_sx));

  const double drift = max_drift(s.channel("e_tot"));
  c.check("E_tot drift <= 1e-3", drift <= 1e-3, fmt("got %.3e", drift));

  const double secs = std::chrono::duration<double>(t1 - t0).count();
  c.check("spectral run under 5 s", secs < 5.0, fmt("%.2f s", secs));
  return c.ok;
}

// 4. Symplecticity of the propagator over randomized stable parameters.
bool criterion4() {
  Checker c{4};
  std::mt19937 rng(20250817);
  const Eigen::Matrix4d j = symplectic_form();
  double worst_sympl = 0.0, worst_det = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Matrix4d gen = build_generator(random_stable(rng));
    for (int i = 0; i < 801; ++i) {
      const double t = 50.0 * i / 800.0;
      const Eigen::Matrix4d s = propagator(gen, t).s;
      worst_sympl = std::max(worst_sympl, (s.transpose() * j * s - j).cwiseAbs().maxCoeff());
      worst_det = std::max(worst_det, std::abs(s.determinant() - 1.0));
    }
  }
  c.check("||S^T J S - J||_max <= 1e-10", worst_sympl <= 1e-10, fmt("got %.3e", worst_sympl));
  c.check("|det S - 1| <= 1e-10", worst_det <= 1e-10, fmt("got %.3e", worst_det));
  return c.ok;
}

// 5. Entropy symmetry, initial purity, uncertainty bound, purity relation.
bool criterion5() {
  Checker c{5};
  const ObservableSeries ga = gaussian_series(kDefaultParams, kAlphaOne, 0.0, 50.0, 801);
  const ObservableSeries fo =
      fock_series(kDefaultParams, kAlphaOne, 8, FockForm::Number, 0.0, 50.0, 801);

  const double sym_g = sup_dev(ga.channel("s_x"), ga.channel("s_y"));
  const double sym_f = sup_dev(fo.channel("s_x"), fo.channel("s_y"));
  c.check("|S_x - S_y| <= 1e-9 (covariance engine)", sym_g <= 1e-9, fmt("got %.3e", sym_g));
  c.check("|S_x - S_y| <= 1e-9 (spectral engine)", sym_f <= 1e-9, fmt("got %.3e", sym_f));
  c.check("S_x(0) <= 1e-10 (covariance engine)", ga.channel("s_x").front() <= 1e-10,
          fmt("got %.3e", ga.channel("s_x").front()));
  c.check("S_x(0) <= 1e-10 (spectral engine)", fo.channel("s_x").front() <= 1e-10,
          fmt("got %.3e", fo.channel("s_x").front()));

  double min_nu = 1e9, worst_mu = 0.0;
  const auto& nu = ga.channel("nu_x");
  const auto& mu = ga.channel("mu_x");
  for (std::size_t i = 0; i < nu.size(); ++i) {
    min_nu = std::min(min_nu, nu[i]);
    worst_mu = std::max(worst_mu, std::abs(mu[i] - 1.0 / (2.0 * nu[i])));
  }
  c.check("nu_x >= 1/2 - 1e-10", min_nu >= 0.5 - 1e-10, fmt("min %.12f", min_nu));
  c.check("mu_x = 1/(2 nu_x) to 1e-12", worst_mu <= 1e-12, fmt("got %.3e", worst_mu));
  return c.ok;
}

// 6. Cross-engine oracle equivalence on a common Hamiltonian form.
bool criterion6() {
  Checker c{6};
  {
    const ModelParams p = validate({1.0, 0.8, 0.05});
    const auto init = InitialConditions::coherent({0.5, 0.0});
    const ObservableSeries ga = gaussian_series(p, init, 0.0, 10.0, 161);
    const ObservableSeries fo = fock_series(p, init, 12, FockForm::Quadrature, 0.0, 10.0, 161);
    double worst = 0.0;
    for (const char* name : {"n_x", "n_y", "s_x"})
      worst = std::max(worst, sup_dev(ga.channel(name), fo.channel(name)));
    c.check("g=0.05, n_cut=12, t<=10: dev <= 1e-3", worst <= 1e-3, fmt("got %.3e", worst));
  }
  {
    const ModelParams p = validate({1.0, 0.8, 0.0});
    const auto init = InitialConditions::coherent({0.5, 0.0});
    const ObservableSeries ga = gaussian_series(p, init, 0.0, 50.0, 801);
    const ObservableSeries fo = fock_series(p, init, 20, FockForm::Quadrature, 0.0, 50.0, 801);
    double worst = 0.0;
    for (const char* name : {"n_x", "n_y", "s_x"})
      worst = std::max(worst, sup_dev(ga.channel(name), fo.channel(name)));
    c.check("g=0, t<=50: dev <= 1e-9", worst <= 1e-9, fmt("got %.3e", worst));
  }
  return c.ok;
}

// 7. Quadratic short-time growth of the radiation occupation.
bool criterion7() {
  Checker c{7};
  const ObservableSeries fine = gaussian_series(kDefaultParams, kAlphaOne, 0.0, 0.3, 65);
  const PowerLawFit fit = short_time_fit(fine, "n_y", 0.3, kDefaultParams.g);
  c.check("n_y exponent = 2.00 +- 0.05", std::abs(fit.exponent - 2.0) <= 0.05,
          fmt("got %.4f (kappa %.3f)", fit.exponent, fit.kappa));
  return c.ok;
}

// 8. Equation-of-motion residuals of the closed-form trajectories.
bool criterion8() {
  Checker c{8};
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> val(-1.5, 1.5);
  std::uniform_real_distribution<double> time(0.0, 40.0);
  const double h = 1e-4;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const ModelParams p = random_stable(rng);
    const NormalModeData m = solve_secular(p);
    const ModalCoefficients mc = project_initial(
        m, InitialConditions::classical(val(rng), val(rng), val(rng), val(rng)));
    for (int k = 0; k < 100; ++k) {
      const double t = time(rng);
      const TrajectoryPoint fm = classical_trajectory(m, mc, t - h);
      const TrajectoryPoint f0 = classical_trajectory(m, mc, t);
      const TrajectoryPoint fp = classical_trajectory(m, mc, t + h);
      const double xdd = (fp.x - 2.0 * f0.x + fm.x) / (h * h);
      const double ydd = (fp.y - 2.0 * f0.y + fm.y) / (h * h);
      worst = std::max(worst, std::abs(xdd + p.omega_x * p.omega_x * f0.x + p.g * f0.y));
      worst = std::max(worst, std::abs(ydd + p.omega_y * p.omega_y * f0.y - p.g * f0.x));
    }
  }
  c.check("EOM residual <= 1e-5 (2000 samples)", worst <= 1e-5, fmt("got %.3e", worst));
  return c.ok;
}

// 9. Spectral-engine conservation and cutoff convergence.
bool criterion9() {
  Checker c{9};
  const FockHamiltonian h = build_hamiltonian(kDefaultParams, 8);
  const CoherentPrep prep = coherent_initial({1.0, 0.0}, h.basis);
  const SpectralPropagator prop(h);
  double norm_drift = 0.0, energy_drift = 0.0;
  const double e0 = expectations(prep.state, h).energy;
  for (int i = 0; i < 801; ++i) {
    const FockState psi = prop.at(prep.state, 50.0 * i / 800.0);
    norm_drift = std::max(norm_drift, std::abs(psi.c.norm() - 1.0));
    energy_drift = std::max(energy_drift, std::abs(expectations(psi, h).energy - e0));
  }
  c.check("norm drift <= 1e-10", norm_drift <= 1e-10, fmt("got %.3e", norm_drift));
  c.check("<H> drift <= 1e-10", energy_drift <= 1e-10, fmt("got %.3e", energy_drift));

  const auto series_at = [&](int n_cut) {
    return fock_series(kDefaultParams, kAlphaOne, n_cut, FockForm::Number, 0.0, 50.0, 801);
  };
  const ObservableSeries s8 = series_at(8);
  const ObservableSeries s16 = series_at(16);
  const ObservableSeries s24 = series_at(24);
  const auto convergence = [&](const ObservableSeries& a, const ObservableSeries& b,
                               double tol, const char* label) {
    double sup = 0.0, mean_gap = 0.0;
    for (const char* name : {"n_x", "n_y", "s_x"}) {
      sup = std::max(sup, sup_dev(a.channel(name), b.channel(name)));
      mean_gap = std::max(mean_gap,
                          std::abs(mean_of(a.channel(name)) - mean_of(b.channel(name))));
    }
    c.check(fmt("cutoff convergence %s", label), sup <= tol,
            fmt("pointwise %.3e vs tol %.0e; time-averaged %.3e", sup, tol, mean_gap));
  };
  convergence(s8, s16, 1e-2, "8 -> 16 <= 1e-2");
  convergence(s16, s24, 1e-4, "16 -> 24 <= 1e-4");
  return c.ok;
}

// 10. Bogoliubov constraints along the default flow.
bool criterion10() {
  Checker c{10};
  const Eigen::Matrix4d gen = build_generator(kDefaultParams);
  double worst_comm = 0.0, worst_sym = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double t = 50.0 * i / 49.0;
    const BogoliubovBlocks b = bogoliubov_blocks(propagator(gen, t).s);
    worst_comm = std::max(
        worst_comm, (b.u * b.u.adjoint() - b.v * b.v.adjoint() - Eigen::Matrix2cd::Identity())
                        .cwiseAbs()
                        .maxCoeff());
    worst_sym = std::max(
        worst_sym,
        (b.u * b.v.transpose() - b.v * b.u.transpose()).cwiseAbs().maxCoeff());
  }
  c.check("U U^dag - V V^dag = I to 1e-10", worst_comm <= 1e-10, fmt("got %.3e", worst_comm));
  c.check("U V^T = V U^T to 1e-10", worst_sym <= 1e-10, fmt("got %.3e", worst_sym));
  return c.ok;
}

// 11. Figure-level qualitative checks: heatmap recurrence and flux balance.
bool criterion11() {
  Checker c{11};
  {
    const ObservableSeries s =
        fock_series(kDefaultParams, kAlphaOne, 8, FockForm::Number, 0.0, 50.0, 801);
    const NormalModeData m = solve_secular(kDefaultParams);
    const double period = 2.0 * M_PI / (m.omega[0] - m.omega[1]);
    double best_t = 0.0, best_p = -1.0;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      if (s.grid[i] < 0.5 * period) continue;
      if (s.p_nx(static_cast<Eigen::Index>(i), 0) > best_p) {
        best_p = s.p_nx(static_cast<Eigen::Index>(i), 0);
        best_t = s.grid[i];
      }
    }
    c.check("P_0 band recurs at 2 pi / dOmega +- 10%",
            std::abs(best_t - period) <= 0.10 * period,
            fmt("peak at t=%.2f, period %.2f", best_t, period));
  }
  {
    const ObservableSeries s = gaussian_series(kDefaultParams, kAlphaOne, 0.0, 50.0, 801);
    const auto phi_int = grid_derivative(s.grid, s.channel("e_int"));
    const auto& fx = s.channel("phi_x");
    const auto& fy = s.channel("phi_y");
    double mean_residual = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i)
      mean_residual += std::abs(fx[i] + fy[i] + phi_int[i]);
    mean_residual /= static_cast<double>(fx.size());
    c.check("mean |Phi_x + Phi_y + dE_int/dt| <= 1e-6", mean_residual <= 1e-6,
            fmt("got %.3e", mean_residual));
  }
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  using CriterionFn = bool (*)();
  const std::vector<CriterionFn> criteria{criterion1, criterion2, criterion3, criterion4,
                                          criterion5, criterion6, criterion7, criterion8,
                                          criterion9, criterion10, criterion11};
  int failures = 0;
  if (argc > 1) {
    const int which = std::atoi(argv[1]);
    if (which < 1 || which > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "criterion number must be 1..%zu\n", criteria.size());
      return 2;
    }
    return criteria[static_cast<std::size_t>(which - 1)]() ? 0 : 1;
  }
  std::vector<bool> results;
  for (const auto& fn : criteria) results.push_back(fn());
  std::printf("\nsummary:\n");
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::printf("  criterion %2zu: %s\n", i + 1, results[i] ? "PASS" : "FAIL");
    if (!results[i]) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
