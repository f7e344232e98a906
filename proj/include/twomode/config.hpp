#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "twomode/fock.hpp"
#include "twomode/model.hpp"

namespace twomode {

enum class Engine { Gaussian, Fock, Both };

inline std::string to_string(Engine e) {
  switch (e) {
    case Engine::Gaussian: return "gaussian";
    case Engine::Fock: return "fock";
    default: return "both";
  }
}

inline const std::vector<std::string>& known_emit_groups() {
  static const std::vector<std::string> groups{"occupations", "entropy", "energies", "heatmap"};
  return groups;
}

/// One run: model parameters, initial data, engine selection, grid, and
/// output options. Defaults follow the reference protocol: t in [0, 50]
/// with 801 samples, Fock cutoff 8, alpha = 1.
struct RunConfig {
  ModelParams params;
  InitialConditions init = InitialConditions::coherent({1.0, 0.0});
  bool classical_init = false;  // whether init came from x0/px0/y0/py0 keys
  Engine engine = Engine::Both;
  double t_start = 0.0;
  double t_end = 50.0;
  int n_t = 801;
  int n_cut = 8;
  FockForm fock_form = FockForm::Number;
  std::string output_dir = ".";
  std::vector<std::string> emit = known_emit_groups();
  double crossval_tol = 1e-3;
  double etot_drift_tol = 1e-3;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw ParseError("trailing characters in value for " + key);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("cannot parse number for key " + key + ": '" + value + "'");
  }
}

inline int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ParseError("cannot parse integer for key " + key + ": '" + value + "'");
  return v;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Parses a flat key = value document ('#' starts a comment). Unknown
/// and duplicate keys are rejected; missing values fall back to the
/// protocol defaults; the result is fully validated.
inline RunConfig parse_config(std::string_view text) {
  static const std::set<std::string> known_keys{
      "omega_x", "omega_y", "g", "alpha", "alpha_im", "x0", "px0", "y0", "py0",
      "engine", "t_start", "t_end", "n_t", "n_cut", "fock_form", "output_dir",
      "emit", "crossval_tol", "etot_drift_tol"};

  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = detail::trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError("line " + std::to_string(lineno) + ": empty key or value");
    if (!known_keys.count(key)) throw UnknownKeyError("unknown key: " + key);
    if (kv.count(key)) throw ParseError("duplicate key: " + key);
    kv[key] = value;
  }

  const auto has = [&](const char* k) { return kv.count(k) > 0; };
  const auto num = [&](const char* k, double fallback) {
    return has(k) ? detail::parse_double(k, kv[k]) : fallback;
  };

  RunConfig cfg;
  for (const char* k : {"omega_x", "omega_y", "g"})
    if (!has(k)) throw ValidationError(std::string("missing required key: ") + k);
  cfg.params = validate({detail::parse_double("omega_x", kv["omega_x"]),
                         detail::parse_double("omega_y", kv["omega_y"]),
                         detail::parse_double("g", kv["g"])});

  const bool has_alpha = has("alpha") || has("alpha_im");
  const bool has_classical = has("x0") || has("px0") || has("y0") || has("py0");
  if (has_alpha && has_classical)
    throw ValidationError("alpha and classical initial data are mutually exclusive");
  if (has_classical) {
    // Unset components keep the default coherent view (alpha = 1).
    const InitialConditions base = InitialConditions::coherent({1.0, 0.0});
    cfg.init = InitialConditions::classical(num("x0", base.x0()), num("px0", base.px0()),
                                            num("y0", base.y0()), num("py0", base.py0()));
    cfg.classical_init = true;
  } else {
    cfg.init = InitialConditions::coherent({num("alpha", 1.0), num("alpha_im", 0.0)});
    cfg.classical_init = false;
  }
  for (double v : {cfg.init.x0(), cfg.init.px0(), cfg.init.y0(), cfg.init.py0()})
    if (!std::isfinite(v)) throw ValidationError("initial data must be finite");

  if (has("engine")) {
    const std::string& e = kv["engine"];
    if (e == "gaussian") cfg.engine = Engine::Gaussian;
    else if (e == "fock") cfg.engine = Engine::Fock;
    else if (e == "both") cfg.engine = Engine::Both;
    else throw ParseError("engine must be gaussian, fock or both");
  }
  if (has("fock_form")) {
    const std::string& f = kv["fock_form"];
    if (f == "number") cfg.fock_form = FockForm::Number;
    else if (f == "quadrature") cfg.fock_form = FockForm::Quadrature;
    else throw ParseError("fock_form must be number or quadrature");
  }

  cfg.t_start = num("t_start", cfg.t_start);
  cfg.t_end = num("t_end", cfg.t_end);
  if (has("n_t")) cfg.n_t = detail::parse_int("n_t", kv["n_t"]);
  if (has("n_cut")) cfg.n_cut = detail::parse_int("n_cut", kv["n_cut"]);
  cfg.crossval_tol = num("crossval_tol", cfg.crossval_tol);
  cfg.etot_drift_tol = num("etot_drift_tol", cfg.etot_drift_tol);

  if (has("output_dir")) cfg.output_dir = kv["output_dir"];
  else if (const char* env = std::getenv("TWOMODE_OUT_DIR")) cfg.output_dir = env;

  if (has("emit")) {
    cfg.emit.clear();
    std::stringstream ss(kv["emit"]);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = detail::trim(item);
      if (item.empty()) continue;
      const auto& groups = known_emit_groups();
      if (std::find(groups.begin(), groups.end(), item) == groups.end())
        throw ValidationError("unknown emit group: " + item);
      if (std::find(cfg.emit.begin(), cfg.emit.end(), item) == cfg.emit.end())
        cfg.emit.push_back(item);
    }
    if (cfg.emit.empty()) throw ValidationError("emit selects no channel groups");
  }

  if (!std::isfinite(cfg.t_start) || !std::isfinite(cfg.t_end))
    throw ValidationError("time bounds must be finite");
  if (!(cfg.t_end > cfg.t_start)) throw ValidationError("t_end must exceed t_start");
  if (cfg.n_t < 2) throw ValidationError("n_t must be at least 2");
  if (cfg.n_cut < 2) throw ValidationError("n_cut must be at least 2");
  if (!(cfg.crossval_tol > 0.0) || !(cfg.etot_drift_tol > 0.0))
    throw ValidationError("tolerances must be positive");
  return cfg;
}

/// Canonical key = value echo; parse_config(config_echo(c)) reproduces c.
inline std::string config_echo(const RunConfig& cfg) {
  std::ostringstream out;
  const auto put = [&](const char* key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  put("omega_x", detail::format_double(cfg.params.omega_x));
  put("omega_y", detail::format_double(cfg.params.omega_y));
  put("g", detail::format_double(cfg.params.g));
  if (cfg.classical_init) {
    put("x0", detail::format_double(cfg.init.x0()));
    put("px0", detail::format_double(cfg.init.px0()));
    put("y0", detail::format_double(cfg.init.y0()));
    put("py0", detail::format_double(cfg.init.py0()));
  } else {
    put("alpha", detail::format_double(cfg.init.alpha().real()));
    put("alpha_im", detail::format_double(cfg.init.alpha().imag()));
  }
  put("engine", to_string(cfg.engine));
  put("t_start", detail::format_double(cfg.t_start));
  put("t_end", detail::format_double(cfg.t_end));
  put("n_t", std::to_string(cfg.n_t));
  put("n_cut", std::to_string(cfg.n_cut));
  put("fock_form", to_string(cfg.fock_form));
  put("output_dir", cfg.output_dir);
  std::string emit;
  for (const auto& g : cfg.emit) {
    if (!emit.empty()) emit += ",";
    emit += g;
  }
  put("emit", emit);
  put("crossval_tol", detail::format_double(cfg.crossval_tol));
  put("etot_drift_tol", detail::format_double(cfg.etot_drift_tol));
  return out.str();
}

}  // namespace twomode
