#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "twomode/config.hpp"
#include "twomode/fock.hpp"
#include "twomode/gaussian.hpp"
#include "twomode/normal_modes.hpp"
#include "twomode/series.hpp"
#include "twomode/version.hpp"

namespace twomode {

namespace detail {

/// 15 digits after the point in scientific notation: lossless enough for
/// a 1e-15 relative round trip and byte-deterministic.
inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15e", v);
  return buf;
}

inline void append_entropy_channels(ObservableSeries& s, std::vector<double> sx,
                                    std::vector<double> sy, std::vector<double> nux,
                                    std::vector<double> mux) {
  s.add_channel("s_x", std::move(sx));
  s.add_channel("s_y", std::move(sy));
  s.add_channel("nu_x", std::move(nux));
  s.add_channel("mu_x", std::move(mux));
}

inline void append_flux_channels(ObservableSeries& s) {
  if (s.grid.size() < 3) return;  // derivative undefined on a 2-point grid
  s.add_channel("phi_x", grid_derivative(s.grid, s.channel("e_x")));
  s.add_channel("phi_y", grid_derivative(s.grid, s.channel("e_y")));
}

}  // namespace detail

/// Exact covariance-matrix evolution over a uniform grid. Every sample
/// uses S(t) = exp(A t) from t = 0; there is no step-to-step dependence.
inline ObservableSeries gaussian_series(const ModelParams& params,
                                        const InitialConditions& init, double t_start,
                                        double t_end, int n_t) {
  ObservableSeries s;
  s.grid = make_grid(t_start, t_end, n_t);
  const Eigen::Matrix4d gen = build_generator(params);
  const GaussianState start = initial_gaussian(init);

  const std::size_t n = s.grid.size();
  std::vector<double> nx(n), ny(n), q(n), d(n), sx(n), sy(n), nux(n), mux(n),
      ex(n), ey(n), eint(n), etot(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GaussianState st = evolve(start, propagator(gen, s.grid[i]));
    const auto [ox, oy] = occupations(st);
    nx[i] = ox; ny[i] = oy;
    q[i] = ox + oy; d[i] = ox - oy;
    const double vx = symplectic_eigenvalue(reduced_covariance(st, Mode::X));
    const double vy = symplectic_eigenvalue(reduced_covariance(st, Mode::Y));
    nux[i] = vx;
    sx[i] = gaussian_entropy(vx);
    sy[i] = gaussian_entropy(vy);
    mux[i] = purity(vx);
    const EnergyBreakdown e = effective_energies(st, params);
    ex[i] = e.e_x; ey[i] = e.e_y; eint[i] = e.e_int; etot[i] = e.e_tot;
  }
  s.add_channel("n_x", std::move(nx));
  s.add_channel("n_y", std::move(ny));
  s.add_channel("q", std::move(q));
  s.add_channel("d", std::move(d));
  detail::append_entropy_channels(s, std::move(sx), std::move(sy), std::move(nux), std::move(mux));
  s.add_channel("e_x", std::move(ex));
  s.add_channel("e_y", std::move(ey));
  s.add_channel("e_int", std::move(eint));
  s.add_channel("e_tot", std::move(etot));
  detail::append_flux_channels(s);
  return s;
}

struct FockRunInfo {
  double truncated_weight = 0.0;
  bool truncation_warning = false;
};

/// Truncated Fock-space evolution over a uniform grid, via a single
/// eigendecomposition of the chosen Hamiltonian form.
inline ObservableSeries fock_series(const ModelParams& params, const InitialConditions& init,
                                    int n_cut, FockForm form, double t_start, double t_end,
                                    int n_t, FockRunInfo* info = nullptr) {
  ObservableSeries s;
  s.grid = make_grid(t_start, t_end, n_t);

  const FockHamiltonian h = build_hamiltonian(params, n_cut, form);
  const std::complex<double> alpha_x =
      init.classical_override()
          ? std::complex<double>(init.x0(), init.px0()) / std::sqrt(2.0)
          : init.alpha();
  const std::complex<double> alpha_y =
      std::complex<double>(init.y0(), init.py0()) / std::sqrt(2.0);
  const CoherentPrep prep = coherent_initial(alpha_x, h.basis, alpha_y);
  if (info) *info = {prep.truncated_weight, prep.warning};
  const SpectralPropagator prop(h);

  const std::size_t n = s.grid.size();
  std::vector<double> nx(n), ny(n), q(n), d(n), sx(n), sy(n), nux(n), mux(n),
      ex(n), ey(n), eint(n), etot(n);
  std::vector<Eigen::VectorXd> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FockState psi = prop.at(prep.state, s.grid[i]);
    const FockExpectations fe = expectations(psi, h);
    nx[i] = fe.n_x; ny[i] = fe.n_y; q[i] = fe.q; d[i] = fe.d;
    const ReducedDensity rx = reduced_density(psi, Mode::X);
    const ReducedDensity ry = reduced_density(psi, Mode::Y);
    sx[i] = vn_entropy(rx);
    sy[i] = vn_entropy(ry);
    mux[i] = (rx.rho * rx.rho).trace().real();
    const LadderMoments lm = ladder_moments(psi);
    nux[i] = symplectic_eigenvalue(quadrature_covariance(lm, Mode::X));
    const EnergyBreakdown e = fock_energies(lm, params, form);
    ex[i] = e.e_x; ey[i] = e.e_y; eint[i] = e.e_int; etot[i] = e.e_tot;
    rows[i] = populations(psi).first;
  }
  s.add_channel("n_x", std::move(nx));
  s.add_channel("n_y", std::move(ny));
  s.add_channel("q", std::move(q));
  s.add_channel("d", std::move(d));
  detail::append_entropy_channels(s, std::move(sx), std::move(sy), std::move(nux), std::move(mux));
  s.add_channel("e_x", std::move(ex));
  s.add_channel("e_y", std::move(ey));
  s.add_channel("e_int", std::move(eint));
  s.add_channel("e_tot", std::move(etot));
  detail::append_flux_channels(s);
  s.p_nx = heatmap(rows);
  return s;
}

/// CSV with time as the first column. Occupation columns are clamped for
/// reporting; raw values stay in the series.
inline std::string format_csv(const ObservableSeries& s, const std::vector<std::string>& columns) {
  std::ostringstream out;
  out << "t";
  for (const auto& c : columns) out << "," << c;
  out << "\n";
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    out << detail::format_value(s.grid[i]);
    for (const auto& c : columns) {
      double v = s.channel(c)[i];
      if (c == "n_x" || c == "n_y") v = clamp_occupation(v);
      out << "," << detail::format_value(v);
    }
    out << "\n";
  }
  return out.str();
}

inline std::string format_heatmap_csv(const ObservableSeries& s) {
  if (!s.has_heatmap()) throw ValidationError("series carries no population matrix");
  std::ostringstream out;
  out << "t";
  for (Eigen::Index c = 0; c < s.p_nx.cols(); ++c) out << ",p" << c;
  out << "\n";
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    out << detail::format_value(s.grid[i]);
    for (Eigen::Index c = 0; c < s.p_nx.cols(); ++c)
      out << "," << detail::format_value(s.p_nx(static_cast<Eigen::Index>(i), c));
    out << "\n";
  }
  return out.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

/// Manifest: reparseable config echo plus version and tolerance comments.
inline std::string manifest_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "# twomode run manifest\n";
  out << "# version: " << kVersion << "\n";
  out << "# tolerances: nu_epsilon=" << kNuEpsilon << " lambda_epsilon=" << kLambdaEpsilon
      << " degeneracy_tol=" << kDegeneracyTol << "\n";
  out << config_echo(cfg);
  return out.str();
}

inline const std::vector<std::string>& occupation_columns() {
  static const std::vector<std::string> c{"n_x", "n_y", "q", "d"};
  return c;
}
inline const std::vector<std::string>& entropy_columns() {
  static const std::vector<std::string> c{"s_x", "s_y", "nu_x", "mu_x"};
  return c;
}
inline std::vector<std::string> energy_columns(const ObservableSeries& s) {
  std::vector<std::string> c{"e_x", "e_y", "e_int", "e_tot"};
  if (s.has_channel("phi_x")) {
    c.push_back("phi_x");
    c.push_back("phi_y");
  }
  return c;
}

struct RunResult {
  std::optional<ObservableSeries> gaussian;
  std::optional<ObservableSeries> fock;
  FockRunInfo fock_info;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

/// Executes the configured engines and writes the selected channel-group
/// CSVs plus a manifest. Identical configs produce byte-identical files.
inline RunResult run(const RunConfig& cfg) {
  RunResult result;
  if (cfg.engine != Engine::Fock)
    result.gaussian = gaussian_series(cfg.params, cfg.init, cfg.t_start, cfg.t_end, cfg.n_t);
  if (cfg.engine != Engine::Gaussian) {
    result.fock = fock_series(cfg.params, cfg.init, cfg.n_cut, cfg.fock_form, cfg.t_start,
                              cfg.t_end, cfg.n_t, &result.fock_info);
    if (result.fock_info.truncation_warning) {
      std::ostringstream w;
      w << "coherent state truncated: weight " << result.fock_info.truncated_weight
        << " outside n_cut=" << cfg.n_cut;
      result.warnings.push_back(w.str());
    }
  }

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());

  const auto emit = [&](const std::string& group) {
    return std::find(cfg.emit.begin(), cfg.emit.end(), group) != cfg.emit.end();
  };
  const auto write_series = [&](const ObservableSeries& s, const std::string& prefix) {
    if (emit("occupations")) {
      const fs::path p = dir / (prefix + "occupations.csv");
      write_text_file(p, format_csv(s, occupation_columns()));
      result.files.push_back(p.string());
    }
    if (emit("entropy")) {
      const fs::path p = dir / (prefix + "entropy.csv");
      write_text_file(p, format_csv(s, entropy_columns()));
      result.files.push_back(p.string());
    }
    if (emit("energies")) {
      const fs::path p = dir / (prefix + "energies.csv");
      write_text_file(p, format_csv(s, energy_columns(s)));
      result.files.push_back(p.string());
    }
  };

  // With both engines the unprefixed files carry the covariance-matrix
  // series; the spectral series gets a fock_ prefix. The population
  // heatmap only exists for the spectral engine and keeps its plain name.
  if (result.gaussian) write_series(*result.gaussian, "");
  if (result.fock)
    write_series(*result.fock, cfg.engine == Engine::Both ? "fock_" : "");
  if (result.fock && emit("heatmap")) {
    const fs::path p = dir / "heatmap.csv";
    write_text_file(p, format_heatmap_csv(*result.fock));
    result.files.push_back(p.string());
  }

  const fs::path mp = dir / "manifest.txt";
  write_text_file(mp, manifest_text(cfg));
  result.files.push_back(mp.string());
  return result;
}

/// Reads back a channel CSV written by this tool.
inline ObservableSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw IoError("empty csv " + path.string());

  std::vector<std::string> names;
  {
    std::stringstream ss(header);
    std::string item;
    while (std::getline(ss, item, ',')) names.push_back(item);
  }
  if (names.empty() || names.front() != "t")
    throw ValidationError("csv must start with a t column");

  ObservableSeries s;
  std::vector<std::vector<double>> cols(names.size());
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string item;
    std::size_t k = 0;
    while (std::getline(ss, item, ',')) {
      if (k >= names.size()) throw ParseError("row has too many fields in " + path.string());
      cols[k].push_back(detail::parse_double(names[k], detail::trim(item)));
      ++k;
    }
    if (k != names.size()) throw ParseError("row has too few fields in " + path.string());
  }
  s.grid = std::move(cols.front());
  for (std::size_t i = 1; i < names.size(); ++i) s.channels[names[i]] = std::move(cols[i]);
  s.check();
  return s;
}

/// Modal report in the layout of the reference tables: one row per mode,
/// six decimal places, determinant footer.
inline std::string report_modes(const ModelParams& params, const InitialConditions& init) {
  const NormalModeData modes = solve_secular(params);
  if (!modes.stable())
    throw DefectiveModesError("modal table requires stable parameters");
  const ModalCoefficients coeffs = project_initial(modes, init);

  const auto fmt = [](double v) {
    if (std::abs(v) < 5e-7) v = 0.0;  // avoid the -0.000000 artifact
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%12.6f", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "mode      Omega^2        Omega          X_j            Y_j            A_j            B_j\n";
  for (int j = 0; j < 2; ++j) {
    const auto js = static_cast<std::size_t>(j);
    out << "   " << (j + 1) << "  " << fmt(modes.omega_sq[js].real()) << "   " << fmt(modes.omega[js])
        << "   " << fmt(modes.xvec[js]) << "   " << fmt(modes.yvec[js]) << "   "
        << fmt(coeffs.a[js]) << "   " << fmt(coeffs.b[js]) << "\n";
  }
  out << "det V = " << fmt(modes.det_v) << "\n";
  return out.str();
}

struct SummaryRow {
  std::string channel;
  double mean = 0.0;
  double amplitude = 0.0;  // (max - min)/2
};

/// Per-channel time average and half-range over the grid.
inline std::vector<SummaryRow> summarize(const ObservableSeries& s) {
  if (s.grid.empty()) throw ValidationError("cannot summarize an empty series");
  std::vector<SummaryRow> rows;
  for (const auto& [name, v] : s.channels) {
    SummaryRow row{name, 0.0, 0.0};
    double lo = v.front(), hi = v.front();
    for (double x : v) {
      row.mean += x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    row.mean /= static_cast<double>(v.size());
    row.amplitude = 0.5 * (hi - lo);
    rows.push_back(row);
  }
  return rows;
}

inline std::string summary_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "channel        mean            amplitude\n";
  for (const auto& r : rows) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%-12s %15.6f %15.6f\n", r.channel.c_str(), r.mean,
                  r.amplitude);
    out << buf;
  }
  return out.str();
}

struct ChannelDeviation {
  std::string name;
  double max_abs = 0.0;
  double rms = 0.0;
};

struct CrossvalReport {
  std::vector<ChannelDeviation> deviations;  // gaussian vs fock
  double etot_drift_gaussian = 0.0;
  double etot_drift_fock = 0.0;
  double d_drift_fock = 0.0;
  double q_drift_fock = 0.0;
  double tol_channels = 1e-3;
  double tol_etot = 1e-3;
  FockForm form = FockForm::Quadrature;
  bool pass = false;

  std::string to_string() const {
    std::ostringstream out;
    out << "cross-engine validation (fock form: " << twomode::to_string(form) << ")\n";
    out << "channel       max|dev|        rms\n";
    for (const auto& d : deviations) {
      char buf[80];
      std::snprintf(buf, sizeof(buf), "%-12s %12.3e %12.3e\n", d.name.c_str(), d.max_abs, d.rms);
      out << buf;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "e_tot drift: gaussian %.3e, fock %.3e (tol %.1e)\n",
                  etot_drift_gaussian, etot_drift_fock, tol_etot);
    out << buf;
    std::snprintf(buf, sizeof(buf), "fock drift: |D - D0| max %.3e vs |Q - Q0| max %.3e\n",
                  d_drift_fock, q_drift_fock);
    out << buf;
    out << (pass ? "PASS" : "FAIL") << " (channel tol " << tol_channels << ")\n";
    return out.str();
  }
};

/// Runs both engines on one grid and reports their disagreement. Only
/// meaningful when both engines represent the same Hamiltonian, i.e.
/// with the quadrature Fock form (the CLI defaults crossval to it).
inline CrossvalReport crossval(const RunConfig& cfg) {
  if (cfg.engine != Engine::Both)
    throw ValidationError("crossval requires engine = both");

  const ObservableSeries ga =
      gaussian_series(cfg.params, cfg.init, cfg.t_start, cfg.t_end, cfg.n_t);
  const ObservableSeries fo = fock_series(cfg.params, cfg.init, cfg.n_cut, cfg.fock_form,
                                          cfg.t_start, cfg.t_end, cfg.n_t);

  CrossvalReport rep;
  rep.form = cfg.fock_form;
  rep.tol_channels = cfg.crossval_tol;
  rep.tol_etot = cfg.etot_drift_tol;

  const auto drift = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x - v.front()));
    return m;
  };
  for (const char* name : {"n_x", "n_y", "s_x", "s_y", "mu_x"}) {
    const auto& a = ga.channel(name);
    const auto& b = fo.channel(name);
    ChannelDeviation d{name, 0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double e = std::abs(a[i] - b[i]);
      d.max_abs = std::max(d.max_abs, e);
      d.rms += e * e;
    }
    d.rms = std::sqrt(d.rms / static_cast<double>(a.size()));
    rep.deviations.push_back(d);
  }
  rep.etot_drift_gaussian = drift(ga.channel("e_tot"));
  rep.etot_drift_fock = drift(fo.channel("e_tot"));
  rep.d_drift_fock = drift(fo.channel("d"));
  rep.q_drift_fock = drift(fo.channel("q"));

  bool ok = rep.etot_drift_gaussian <= rep.tol_etot && rep.etot_drift_fock <= rep.tol_etot;
  for (const auto& d : rep.deviations)
    if (d.name == "n_x" || d.name == "n_y" || d.name == "s_x")
      ok = ok && d.max_abs <= rep.tol_channels;
  // Under coupling, the balance D = n_x - n_y should be the quieter
  // combination; without coupling the comparison carries no information.
  if (cfg.params.g != 0.0 && rep.q_drift_fock > 1e-12)
    ok = ok && rep.d_drift_fock < rep.q_drift_fock;
  rep.pass = ok;
  return rep;
}

}  // namespace twomode
