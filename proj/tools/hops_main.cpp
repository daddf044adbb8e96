#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "hops/ensembles.hpp"
#include "hops/report.hpp"
#include "hops/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

hops::SweepConfig sweep_config_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hops::ConfigError("config file not readable: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw hops::ConfigError("config parse error in " + path + ": " + e.what());
  }
  hops::SweepConfig c;
  try {
    c.ax_sq = doc.value("ax_sq", c.ax_sq);
    c.ph_mag = doc.value("ph_mag", c.ph_mag);
    if (doc.contains("kt")) {
      const auto& kt = doc.at("kt");
      c.kt_min = kt.value("min", c.kt_min);
      c.kt_max = kt.value("max", c.kt_max);
      c.kt_steps = kt.value("steps", c.kt_steps);
    }
    if (doc.contains("delta")) {
      const auto& d = doc.at("delta");
      c.delta_min = d.value("min", c.delta_min);
      c.delta_max = d.value("max", c.delta_max);
      c.delta_steps = d.value("steps", c.delta_steps);
    }
    c.oracle = doc.value("oracle", c.oracle);
    c.n_max = doc.value("n_max", c.n_max);
    c.threads = doc.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw hops::ConfigError("config schema error in " + path + ": " + e.what());
  }
  return c;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hops::ConfigError("cannot open output file: " + path);
  out << contents;
}

int run_sweep_command(const hops::SweepConfig& config, const std::string& out_path,
                      bool write_meta) {
  const std::vector<hops::SweepRow> rows = hops::run_sweep(config);
  std::ostringstream csv;
  hops::write_sweep_csv(rows, config.oracle, csv);
  write_file(out_path, csv.str());
  if (write_meta) {
    write_file(out_path + ".meta.json", hops::sweep_metadata_json(config));
  }
  size_t flagged = 0;
  for (const auto& r : rows) flagged += r.oracle_overflow ? 1 : 0;
  std::cout << "wrote " << rows.size() << " rows to " << out_path;
  if (config.oracle) std::cout << " (" << flagged << " rows flagged for truncation overflow)";
  std::cout << "\n";
  return kExitOk;
}

int run_verify_command(int n_max, int algebra_n_max, const std::string& grid_path,
                       const std::string& out_prefix) {
  const hops::GridFixture grid = hops::load_grid_fixture(grid_path);
  hops::VerifyOptions options;
  options.n_max = n_max;
  options.algebra_n_max = algebra_n_max;
  const hops::VerifyReport report = hops::run_verify(options, grid);

  std::ostringstream text;
  hops::write_text(report, text);
  std::ostringstream csv;
  hops::write_csv(report, csv);
  write_file(out_prefix + ".txt", text.str());
  write_file(out_prefix + ".csv", csv.str());
  std::cout << text.str();
  std::cout << "report written to " << out_prefix << ".txt and " << out_prefix
            << ".csv\n";
  return report.mandated_pass() ? kExitOk : kExitVerifyFailed;
}

std::string row_to_string(const std::array<double, 4>& v) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "% .10g % .10g % .10g % .10g", v[0], v[1],
                v[2], v[3]);
  return buf;
}

int run_demo_command(double a0, double chi_h, double delta_h, int n_phases,
                     int n_max, const std::string& out_path) {
  const hops::FockSpace space = hops::make_fock_space(n_max);
  const hops::HopsEnsembleSpec hidden{a0, chi_h, delta_h, n_phases};
  const hops::PolarizedFieldSpec polarized{a0, chi_h, delta_h, n_phases};

  const hops::EnsembleParameters hc = hops::classical_parameters(hidden);
  const hops::EnsembleParameters hq = hops::quantum_parameters(space, hidden);
  const hops::EnsembleParameters pc = hops::classical_parameters(polarized);
  const hops::EnsembleParameters pq = hops::quantum_parameters(space, polarized);

  std::cout << "hidden ensemble (a0=" << a0 << ", chi_h=" << chi_h
            << ", delta_h=" << delta_h << ", M=" << n_phases << ")\n";
  std::cout << "                 s0          s1          s2          s3\n";
  std::cout << "  classical s: " << row_to_string(hc.s) << "\n";
  std::cout << "  quantum   s: " << row_to_string(hq.s) << "\n";
  std::cout << "  classical h: " << row_to_string(hc.h) << "\n";
  std::cout << "  quantum   h: " << row_to_string(hq.h) << "\n";
  std::cout << "mirrored polarized ensemble (chi0=" << chi_h
            << ", delta0=" << delta_h << ")\n";
  std::cout << "  classical s: " << row_to_string(pc.s) << "\n";
  std::cout << "  quantum   s: " << row_to_string(pq.s) << "\n";
  std::cout << "  classical h: " << row_to_string(pc.h) << "\n";
  std::cout << "  quantum   h: " << row_to_string(pq.h) << "\n";
  std::cout << "the phase-averaged hidden ensemble erases s1..s3 while h2, h3 "
               "survive; the polarized ensemble swaps the roles\n";

  if (!out_path.empty()) {
    std::ostringstream csv;
    csv << "ensemble,path,s0,s1,s2,s3,h0,h1,h2,h3\n";
    auto emit = [&csv](const char* ensemble, const char* path,
                       const hops::EnsembleParameters& p) {
      char buf[360];
      std::snprintf(buf, sizeof(buf),
                    "%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    ensemble, path, p.s[0], p.s[1], p.s[2], p.s[3], p.h[0],
                    p.h[1], p.h[2], p.h[3]);
      csv << buf;
    };
    emit("hidden", "classical", hc);
    emit("hidden", "quantum", hq);
    emit("polarized", "classical", pc);
    emit("polarized", "quantum", pq);
    write_file(out_path, csv.str());
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hops: hidden optical-polarization simulator and verifier"};
  app.require_subcommand(1);

  // --- sweep ---
  auto* sweep = app.add_subcommand(
      "sweep", "Sweep the squeezing function and hidden moments over a "
               "(kt, delta_h) grid and write a CSV surface");
  std::string preset, config_path, sweep_out = "sweep.csv";
  bool no_meta = false;
  double ax_sq = 1.0, ph_mag = 1.0, kt_min = 0.0, kt_max = 1.0;
  double delta_min = -std::numbers::pi + 2.0 * std::numbers::pi / 72.0;
  double delta_max = std::numbers::pi;
  int kt_steps = 50, delta_steps = 72, n_max = 24, threads = 0;
  bool oracle = false;
  auto* opt_preset = sweep->add_option("--preset", preset, "fig1a or fig1b")
                         ->check(CLI::IsMember({"fig1a", "fig1b"}));
  auto* opt_config = sweep->add_option("--config", config_path, "JSON config file");
  auto* opt_ax = sweep->add_option("--ax-sq", ax_sq, "x-mode mean photon number |alpha_x|^2");
  auto* opt_ph = sweep->add_option("--ph-mag", ph_mag, "|p_h| = |alpha_y / conj(alpha_x)|");
  auto* opt_ktmin = sweep->add_option("--kt-min", kt_min, "lower kt bound");
  auto* opt_ktmax = sweep->add_option("--kt-max", kt_max, "upper kt bound");
  auto* opt_steps = sweep->add_option("--steps", kt_steps, "kt grid points");
  auto* opt_dmin = sweep->add_option("--delta-min", delta_min, "lower delta_h bound");
  auto* opt_dmax = sweep->add_option("--delta-max", delta_max, "upper delta_h bound");
  auto* opt_dsteps = sweep->add_option("--delta-steps", delta_steps, "delta_h grid points");
  auto* opt_oracle = sweep->add_flag("--oracle", oracle, "add truncated-Fock oracle columns");
  auto* opt_nmax = sweep->add_option("--n-max", n_max, "oracle cutoff");
  auto* opt_threads = sweep->add_option("--threads", threads, "worker threads (0 = auto)");
  sweep->add_option("--out", sweep_out, "output CSV path");
  sweep->add_flag("--no-meta", no_meta, "skip the JSON metadata sidecar");

  // --- verify ---
  auto* verify = app.add_subcommand(
      "verify", "Run the closed-form vs oracle verification suites and "
                "write text + CSV reports");
  int verify_n_max = 24, algebra_n_max = 8;
  std::string grid_path = "data/acceptance_grid.json";
  std::string out_prefix = "verify_report";
  verify->add_option("--n-max", verify_n_max, "oracle cutoff");
  verify->add_option("--algebra-n-max", algebra_n_max, "cutoff for operator identities");
  verify->add_option("--grid", grid_path, "grid fixture JSON path");
  verify->add_option("--out-prefix", out_prefix, "report file prefix");

  // --- demo-hidden ---
  auto* demo = app.add_subcommand(
      "demo-hidden", "Show Stokes vs hidden parameters on phase-averaged "
                     "classical and quantum ensembles");
  double a0 = 2.0, chi_h = 0.5 * std::numbers::pi, demo_delta = 0.0;
  int n_phases = 64, demo_n_max = 24;
  std::string demo_out;
  demo->add_option("--a0", a0, "field amplitude A0");
  demo->add_option("--chi-h", chi_h, "polar angle chi_h in [0, pi]");
  demo->add_option("--delta-h", demo_delta, "phase sum delta_h in (-pi, pi]");
  demo->add_option("--n-phases", n_phases, "phase grid size M (>= 4)");
  demo->add_option("--n-max", demo_n_max, "quantum cutoff");
  demo->add_option("--out", demo_out, "optional CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sweep->parsed()) {
      hops::SweepConfig config;
      if (opt_preset->count() > 0) {
        config = (preset == "fig1a") ? hops::preset_fig1a() : hops::preset_fig1b();
      }
      if (opt_config->count() > 0) config = sweep_config_from_json(config_path);
      if (opt_ax->count() > 0) config.ax_sq = ax_sq;
      if (opt_ph->count() > 0) config.ph_mag = ph_mag;
      if (opt_ktmin->count() > 0) config.kt_min = kt_min;
      if (opt_ktmax->count() > 0) config.kt_max = kt_max;
      if (opt_steps->count() > 0) config.kt_steps = kt_steps;
      if (opt_dmin->count() > 0) config.delta_min = delta_min;
      if (opt_dmax->count() > 0) config.delta_max = delta_max;
      if (opt_dsteps->count() > 0) config.delta_steps = delta_steps;
      if (opt_oracle->count() > 0) config.oracle = oracle;
      if (opt_nmax->count() > 0) config.n_max = n_max;
      if (opt_threads->count() > 0) config.threads = threads;
      return run_sweep_command(config, sweep_out, !no_meta);
    }
    if (verify->parsed()) {
      return run_verify_command(verify_n_max, algebra_n_max, grid_path, out_prefix);
    }
    if (demo->parsed()) {
      return run_demo_command(a0, chi_h, demo_delta, n_phases, demo_n_max, demo_out);
    }
  } catch (const hops::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hops::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hops::TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  return kExitUsage;
}
