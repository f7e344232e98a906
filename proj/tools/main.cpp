#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "twomode/twomode.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw twomode::IoError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_simulate(const std::string& config_path, const std::string& engine_override,
                 const std::string& out_override) {
  std::string text = read_file(config_path);
  if (!engine_override.empty()) text += "\nengine = " + engine_override + "\n";
  if (!out_override.empty()) text += "\noutput_dir = " + out_override + "\n";
  const twomode::RunConfig cfg = twomode::parse_config(text);
  const twomode::RunResult result = twomode::run(cfg);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& f : result.files) std::cout << "wrote " << f << "\n";
  const auto& series = result.gaussian ? *result.gaussian : *result.fock;
  std::cout << twomode::summary_table(twomode::summarize(series));
  return 0;
}

int run_modes(double omega_x, double omega_y, double g, std::optional<double> alpha,
              std::optional<double> x0, std::optional<double> px0, std::optional<double> y0,
              std::optional<double> py0) {
  const twomode::ModelParams params = twomode::validate({omega_x, omega_y, g});
  twomode::InitialConditions init = twomode::InitialConditions::coherent({1.0, 0.0});
  const bool classical = x0 || px0 || y0 || py0;
  if (alpha && classical)
    throw twomode::ValidationError("--alpha and classical initial data are mutually exclusive");
  if (alpha) {
    init = twomode::InitialConditions::coherent({*alpha, 0.0});
  } else if (classical) {
    init = twomode::InitialConditions::classical(
        x0.value_or(init.x0()), px0.value_or(init.px0()),
        y0.value_or(init.y0()), py0.value_or(init.py0()));
  }
  std::cout << twomode::report_modes(params, init);
  return 0;
}

int run_crossval(const std::string& config_path) {
  std::string text = read_file(config_path);
  // Apples-to-apples comparison needs both engines on the quadrature form
  // unless the config explicitly says otherwise.
  if (text.find("fock_form") == std::string::npos)
    text += "\nfock_form = quadrature\n";
  if (text.find("engine") == std::string::npos) text += "\nengine = both\n";
  const twomode::RunConfig cfg = twomode::parse_config(text);
  const twomode::CrossvalReport rep = twomode::crossval(cfg);
  std::cout << rep.to_string();
  return rep.pass ? 0 : 3;
}

int run_envelope(double m0, double k, double x_min, double x_max, int samples) {
  if (!(x_max > x_min)) throw twomode::ValidationError("--x-max must exceed --x-min");
  if (samples < 2) throw twomode::ValidationError("--samples must be at least 2");
  const twomode::MetricProfile profile(m0, k);
  std::printf("x,a,b\n");
  for (int i = 0; i < samples; ++i) {
    const double x = x_min + (x_max - x_min) * i / static_cast<double>(samples - 1);
    const auto [a, b] = twomode::metric_profiles(profile, x);
    std::printf("%.15e,%.15e,%.15e\n", x, a, b);
  }
  return 0;
}

int run_summarize(const std::string& csv_path) {
  const twomode::ObservableSeries s = twomode::read_series_csv(csv_path);
  std::cout << twomode::summary_table(twomode::summarize(s));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-mode coupled-oscillator simulator"};
  app.require_subcommand(1);

  std::string config_path, engine_override, out_override, csv_path;

  auto* simulate = app.add_subcommand("simulate", "Run the configured engines and write CSV series");
  simulate->add_option("--config", config_path, "Flat key = value config file")->required();
  simulate->add_option("--engine", engine_override, "Override engine: gaussian, fock or both")
      ->check(CLI::IsMember({"gaussian", "fock", "both"}));
  simulate->add_option("--out", out_override, "Override output directory");

  double omega_x = 1.0, omega_y = 1.0, g = 0.0;
  std::optional<double> alpha, x0, px0, y0, py0;
  auto* modes = app.add_subcommand("modes", "Print the normal-mode table");
  modes->add_option("--omega-x", omega_x, "x-sector frequency")->required();
  modes->add_option("--omega-y", omega_y, "y-sector frequency")->required();
  modes->add_option("-g,--coupling", g, "coupling strength")->required();
  modes->add_option("--alpha", alpha, "coherent amplitude (default 1)");
  modes->add_option("--x0", x0, "initial x (default sqrt(2))");
  modes->add_option("--px0", px0, "initial p_x (default 0)");
  modes->add_option("--y0", y0, "initial y (default 0)");
  modes->add_option("--py0", py0, "initial p_y (default 0)");

  auto* crossval = app.add_subcommand("crossval", "Compare the two engines on one grid");
  crossval->add_option("--config", config_path, "Flat key = value config file")->required();

  double m0 = 1.0, k = 0.1, x_min = 0.1, x_max = 10.0;
  int samples = 200;
  auto* envelope = app.add_subcommand("envelope", "Sample the metric profile functions as CSV");
  envelope->add_option("--m0", m0, "mass parameter")->required();
  envelope->add_option("--k", k, "evaporation rate")->required();
  envelope->add_option("--x-min", x_min, "lower end of the sample range")->required();
  envelope->add_option("--x-max", x_max, "upper end of the sample range")->required();
  envelope->add_option("--samples", samples, "number of samples");

  auto* summarize = app.add_subcommand("summarize", "Mean and half-range per channel of a CSV");
  summarize->add_option("csv", csv_path, "channel CSV written by simulate")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(config_path, engine_override, out_override);
    if (modes->parsed()) return run_modes(omega_x, omega_y, g, alpha, x0, px0, y0, py0);
    if (crossval->parsed()) return run_crossval(config_path);
    if (envelope->parsed()) return run_envelope(m0, k, x_min, x_max, samples);
    if (summarize->parsed()) return run_summarize(csv_path);
  } catch (const twomode::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
