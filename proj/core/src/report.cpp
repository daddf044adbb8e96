#include "hops/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hops/dynamics.hpp"
#include "hops/ensembles.hpp"

namespace hops {

bool VerifyReport::mandated_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow& r) { return r.pass || !r.mandated; });
}

GridFixture load_grid_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("grid fixture not readable: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("grid fixture parse error in " + path + ": " + e.what());
  }
  GridFixture grid;
  try {
    for (const auto& p : doc.at("points")) {
      grid.points.push_back(HopsInput{p.at("ax_sq").get<double>(),
                                      p.at("ph_mag").get<double>(),
                                      p.at("delta_h").get<double>()});
    }
    for (const auto& kt : doc.at("kt")) grid.kts.push_back(kt.get<double>());
    grid.zeta_check = doc.value("zeta_check", 0.7);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("grid fixture schema error in " + path + ": " + e.what());
  }
  if (grid.points.empty() || grid.kts.empty()) {
    throw ConfigError("grid fixture is empty: " + path);
  }
  return grid;
}

namespace {

constexpr double kAlgebraTol = 1e-12;
constexpr double kMomentRelTol = 1e-6;
constexpr double kProductTol = 1e-9;
constexpr double kIhopTol = 1e-12;
constexpr double kOnsetRelTol = 1e-6;
constexpr double kFactorizationTol = 1e-9;

class Sink {
 public:
  explicit Sink(VerifyReport* report) : report_(report) {}

  void add(std::string suite, std::string name, double deviation,
           double tolerance, bool mandated, std::string note = "") {
    report_->rows.push_back(CheckRow{std::move(suite), std::move(name),
                                     deviation, tolerance,
                                     deviation <= tolerance, mandated,
                                     std::move(note)});
  }

  void add_failed(std::string suite, std::string name, std::string note) {
    report_->rows.push_back(CheckRow{std::move(suite), std::move(name),
                                     std::numeric_limits<double>::infinity(),
                                     0.0, false, true, std::move(note)});
  }

 private:
  VerifyReport* report_;
};

double rel_dev(double measured, double reference) {
  return std::abs(measured - reference) /
         std::max(1.0, std::abs(reference));
}

std::string point_label(const HopsInput& p) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(ax_sq=%g, ph=%g, delta=%g)", p.ax_sq,
                p.ph_mag, p.delta_h);
  return buf;
}

void commutator_suites(Sink& sink, int n_max) {
  const FockSpace space = make_fock_space(n_max);
  const OperatorQuad h = hidden_operators(space, 0.0);
  const OperatorMatrix one = identity_operator(space);
  const Complex two_i{0.0, 2.0};

  auto interior_dev = [](const OperatorMatrix& m) {
    return max_abs(project_interior(m, 1));
  };

  const std::string hc = "hidden_commutators";
  sink.add(hc, "[H1,H0] = 0", max_abs(commutator(h.o1, h.o0)), kAlgebraTol, true);
  sink.add(hc, "[H1,H2] = 0", max_abs(commutator(h.o1, h.o2)), kAlgebraTol, true);
  sink.add(hc, "[H1,H3] = 0", max_abs(commutator(h.o1, h.o3)), kAlgebraTol, true);

  const OperatorMatrix c02 = commutator(h.o0, h.o2);
  const double dev_minus = interior_dev(c02 - (-two_i) * h.o3);
  const double dev_plus = interior_dev(c02 - two_i * h.o3);
  {
    std::ostringstream note;
    note << "measured sign is -2i H3; +2i H3 deviates by " << dev_plus;
    sink.add(hc, "[H0,H2] = -2i H3 (interior)", dev_minus, kAlgebraTol, true,
             note.str());
  }
  const OperatorMatrix c03 = commutator(h.o0, h.o3);
  const double dev03_plus = interior_dev(c03 - two_i * h.o2);
  const double dev03_minus = interior_dev(c03 - (-two_i) * h.o2);
  {
    std::ostringstream note;
    note << "measured sign is +2i H2; -2i H2 deviates by " << dev03_minus;
    sink.add(hc, "[H0,H3] = +2i H2 (interior)", dev03_plus, kAlgebraTol, true,
             note.str());
  }
  sink.add(hc, "[H2,H3] = 2i(1+H0) (interior)",
           interior_dev(commutator(h.o2, h.o3) - two_i * (one + h.o0)),
           kAlgebraTol, true);
  sink.add(hc, "H1^2+H2^2+H3^2-H0^2 = 2(1+H0) (interior)",
           interior_dev(h.o1 * h.o1 + h.o2 * h.o2 + h.o3 * h.o3 -
                        h.o0 * h.o0 - Complex(2.0, 0.0) * (one + h.o0)),
           kAlgebraTol, true);

  const OperatorQuad s = stokes_operators(space);
  const std::string su2 = "stokes_su2";
  sink.add(su2, "[S0,S1] = 0", max_abs(commutator(s.o0, s.o1)), kAlgebraTol, true);
  sink.add(su2, "[S0,S2] = 0", max_abs(commutator(s.o0, s.o2)), kAlgebraTol, true);
  sink.add(su2, "[S0,S3] = 0", max_abs(commutator(s.o0, s.o3)), kAlgebraTol, true);
  sink.add(su2, "[S1,S2] = 2i S3 (interior)",
           interior_dev(commutator(s.o1, s.o2) - two_i * s.o3), kAlgebraTol, true);
  sink.add(su2, "[S2,S3] = 2i S1 (interior)",
           interior_dev(commutator(s.o2, s.o3) - two_i * s.o1), kAlgebraTol, true);
  sink.add(su2, "[S3,S1] = 2i S2 (interior)",
           interior_dev(commutator(s.o3, s.o1) - two_i * s.o2), kAlgebraTol, true);
}

void product_suite(Sink& sink, const GridFixture& grid, const MomentOracle& oracle) {
  const std::string suite = "uncertainty_products";
  for (const HopsInput& p : grid.points) {
    for (double kt : grid.kts) {
      try {
        const StateVector state = oracle.evolved_state(p, kt);
        const auto rep = uncertainty_products_hold(state, oracle.quad());
        const double worst =
            std::max({0.0, -rep.margins[0], -rep.margins[1], -rep.margins[2]});
        std::ostringstream name;
        name << point_label(p) << " kt=" << kt;
        sink.add(suite, name.str(), worst, kProductTol, true);
      } catch (const TruncationError& e) {
        sink.add_failed(suite, point_label(p), e.what());
      }
    }
  }
  // Vacuum saturates var(H2) var(H3) = |<1+H0>|^2 exactly.
  const StateVector vac = coherent_state(oracle.space(), 0.0, 0.0);
  const auto rep = uncertainty_products_hold(vac, oracle.quad());
  sink.add(suite, "vacuum (saturated bound)",
           std::max({0.0, -rep.margins[0], -rep.margins[1], -rep.margins[2]}),
           kProductTol, true);
}

void moment_suites(Sink& sink, const GridFixture& grid, const MomentOracle& oracle) {
  const std::string ms = "moments_closed_vs_oracle";
  const std::string vs = "variances_closed_vs_oracle";
  const std::string off = "h3_variance_offset";

  for (const HopsInput& p : grid.points) {
    double h2_var_min = std::numeric_limits<double>::infinity();
    double h2_var_max = -std::numeric_limits<double>::infinity();
    for (double kt : grid.kts) {
      std::ostringstream name;
      name << point_label(p) << " kt=" << kt;
      try {
        const StateVector state = oracle.evolved_state(p, kt);
        const HiddenMoments mo = oracle.moments_of(state);
        const HiddenVariances vo = oracle.variances_of(state);
        const HiddenMoments mc = hidden_moments(p, kt);
        const HiddenVariances vc = hidden_variances(p, kt, VarianceSource::ClosedForm);

        const double mom_dev =
            std::max({rel_dev(mc.h0, mo.h0), rel_dev(mc.h1, mo.h1),
                      rel_dev(mc.h2, mo.h2), rel_dev(mc.h3, mo.h3)});
        sink.add(ms, name.str(), mom_dev, kMomentRelTol, true);

        const double var_dev = std::max(rel_dev(vc.v1, vo.v1), rel_dev(vc.v2, vo.v2));
        sink.add(vs, name.str() + " v1,v2", var_dev, kMomentRelTol, true);
        sink.add(vs, name.str() + " v0", rel_dev(vc.v0, vo.v0), kMomentRelTol,
                 false, "closed form for var(H0) matches measurement");
        {
          std::ostringstream note;
          note << "closed v3=" << vc.v3 << " oracle v3=" << vo.v3
               << " (closed + 2 tracks the oracle)";
          sink.add(off, name.str(), rel_dev(vc.v3 + 2.0, vo.v3), kMomentRelTol,
                   false, note.str());
        }
        h2_var_min = std::min(h2_var_min, vo.v2);
        h2_var_max = std::max(h2_var_max, vo.v2);
      } catch (const TruncationError& e) {
        sink.add_failed(ms, name.str(), e.what());
      }
    }
    if (std::isfinite(h2_var_min)) {
      sink.add(vs, point_label(p) + std::string(" var(H2) kt-independence"),
               (h2_var_max - h2_var_min) / std::max(1.0, h2_var_max),
               kMomentRelTol, true);
    }
  }

  // Free-phase independence: the moments must not see zeta.
  const HopsInput& p0 = grid.points.front();
  const double kt0 = grid.kts.back();
  try {
    const HiddenMoments a = oracle.moments(p0, kt0, 0.0);
    const HiddenMoments b = oracle.moments(p0, kt0, grid.zeta_check);
    const double dev = std::max({rel_dev(a.h0, b.h0), rel_dev(a.h1, b.h1),
                                 rel_dev(a.h2, b.h2), rel_dev(a.h3, b.h3)});
    std::ostringstream name;
    name << "zeta-independence at " << point_label(p0) << " kt=" << kt0
         << " (zeta=" << grid.zeta_check << ")";
    sink.add(ms, name.str(), dev, 1e-9, true);
  } catch (const TruncationError& e) {
    sink.add_failed(ms, "zeta-independence", e.what());
  }
}

void squeezing_suite(Sink& sink, const GridFixture& grid, const MomentOracle& oracle) {
  const std::string suite = "squeezing_criterion";
  for (const HopsInput& p : grid.points) {
    for (double kt : grid.kts) {
      const double sq = squeezing_function(p, kt);
      if (std::abs(sq - 1.0) <= 1e-6) continue;  // criterion boundary
      std::ostringstream name;
      name << point_label(p) << " kt=" << kt;
      try {
        const StateVector state = oracle.evolved_state(p, kt);
        const double var_h2 = variance(state, oracle.quad().o2);
        const double bound = std::abs(1.0 + hidden_moments(p, kt).h0);
        const bool agree = (sq > 1.0) == (var_h2 < bound);
        std::ostringstream note;
        note << "sq=" << sq << " var(H2)=" << var_h2 << " |1+h0|=" << bound;
        sink.add(suite, name.str(), agree ? 0.0 : 1.0, 0.5, true, note.str());
      } catch (const TruncationError& e) {
        sink.add_failed(suite, name.str(), e.what());
      }
    }
  }
}

void ihop_suite(Sink& sink, const GridFixture& grid) {
  const std::string suite = "ihop_evolution";
  // Deviations are scaled by max(1, |value|): the evolved index is
  // unbounded near the Moebius pole and the grid passes within 0.004 of
  // it, where hundreds of ulps of a magnitude-200 value are expected.
  double worst_closed = 0.0;
  double worst_group = 0.0;
  double worst_circle = 0.0;
  for (const HopsInput& p : grid.points) {
    if (p.ax_sq == 0.0) continue;
    const auto [ax, ay] = reconstruct_amplitudes(p);
    for (double kt : {0.1, 0.25, 0.4}) {
      const Complex closed = ihop_evolve(ihop_of(ax, ay), kt);
      const EvolvedAmplitudes amps = evolve_amplitudes(ax, ay, kt);
      worst_closed = std::max(
          worst_closed,
          std::abs(closed - ihop_of(amps.alpha_x_t, amps.alpha_y_t)) /
              std::max(1.0, std::abs(closed)));
      const Complex two_step = ihop_evolve(ihop_evolve(ihop_of(ax, ay), kt), 0.15);
      const Complex one_step = ihop_evolve(ihop_of(ax, ay), kt + 0.15);
      worst_group = std::max(
          worst_group,
          std::abs(two_step - one_step) / std::max(1.0, std::abs(one_step)));
    }
    if (std::abs(std::abs(ihop_of(ax, ay)) - 1.0) < 1e-12) {
      worst_circle = std::max(
          worst_circle,
          std::abs(std::abs(ihop_evolve(ihop_of(ax, ay), 0.35)) - 1.0));
    }
  }
  sink.add(suite, "closed form equals mean-amplitude ratio", worst_closed,
           kIhopTol, true, "deviation scaled by max(1, |value|)");
  sink.add(suite, "composition law kt1 then kt2 equals kt1+kt2", worst_group,
           kIhopTol, true, "deviation scaled by max(1, |value|)");
  sink.add(suite, "unit circle preserved", worst_circle, kIhopTol, true);
  const double fp_dev =
      std::max(std::abs(ihop_evolve(Complex(0.0, 1.0), 0.45) - Complex(0.0, 1.0)),
               std::abs(ihop_evolve(Complex(0.0, -1.0), 0.45) - Complex(0.0, -1.0)));
  sink.add(suite, "fixed points +-i", fp_dev, kIhopTol, true);
}

void critical_time_suite(Sink& sink, const GridFixture& grid) {
  const std::string suite = "critical_time_vs_onset";
  for (const HopsInput& p : grid.points) {
    if (!(p.ax_sq > 0.0) || !(p.ph_mag > 0.0) || std::sin(p.delta_h) <= 0.0) {
      continue;
    }
    const double onset = onset_time_numeric(p, 1.0);
    const auto closed = critical_time(p, 1.0);
    const auto matched = onset_time_closed(p, 1.0);
    if (!closed || !matched || onset <= 0.0) continue;
    const double dev = std::abs(*closed - onset) / onset;
    {
      std::ostringstream note;
      note << "closed t0=" << *closed << " numeric onset=" << onset
           << "; the closed atanh argument is 4x smaller than the one the "
              "closed-form moments imply";
      sink.add(suite, point_label(p) + std::string(" closed vs bisection"),
               dev, kOnsetRelTol, true, note.str());
    }
    sink.add(suite, point_label(p) + std::string(" corrected form vs bisection"),
             std::abs(*matched - onset) / onset, 1e-8, false,
             "atanh[2 ax_sq ph sin(delta) / (1 + ax_sq(1+ph^2))] / 2k");
    const double ratio = std::tanh(2.0 * onset) / std::tanh(2.0 * *closed);
    std::ostringstream note;
    note << "measured atanh-argument ratio " << ratio;
    sink.add(suite, point_label(p) + std::string(" argument ratio = 4"),
             std::abs(ratio - 4.0), 1e-6, false, note.str());
  }

  // Direct oracle spot check of the onset: the measured degree, computed
  // from oracle moments with no closed forms, brackets 1 at the numeric
  // onset of the closed-form degree.
  const HopsInput spot{1.0, 1.0, 0.5 * std::numbers::pi};
  const double onset = onset_time_numeric(spot, 1.0);
  try {
    MomentOracle oracle(make_fock_space(30));
    auto oracle_degree = [&](double kt) {
      const HiddenMoments h = oracle.moments(spot, kt);
      return std::sqrt(h.h1 * h.h1 + h.h2 * h.h2 + h.h3 * h.h3) / h.h0;
    };
    const double below = oracle_degree(onset - 0.02);
    const double above = oracle_degree(onset + 0.02);
    std::ostringstream note;
    note << "oracle degree " << below << " -> " << above
         << " around numeric onset kt=" << onset;
    sink.add(suite, "oracle degree brackets 1 at the numeric onset",
             (below < 1.0 && above > 1.0) ? 0.0 : 1.0, 0.5, true, note.str());
  } catch (const TruncationError& e) {
    sink.add_failed(suite, "oracle degree onset spot", e.what());
  }
}

void factorization_suite(Sink& sink, int n_max) {
  const std::string suite = "factorization_ratios";
  const FockSpace space = make_fock_space(std::max(n_max, 14));
  {
    const Complex p{0.5, 0.25};
    const Complex ax{0.9, 0.0};
    const StateVector state = coherent_state(space, ax, p * ax);
    const auto rep = factorization_check(state, p, FactorizationKind::Polarized, 3);
    sink.add(suite, "polarized: conj(p)^m_y p^n_y convention",
             rep.max_dev_derived, kFactorizationTol, true);
    std::ostringstream note;
    note << "alternative conj(p)^m_y p^m_x convention deviates by "
         << rep.max_dev_alt;
    sink.add(suite, "polarized: conj(p)^m_y p^m_x convention (recorded)",
             rep.max_dev_alt, kFactorizationTol, false, note.str());
  }
  {
    const Complex ph{0.4, 0.3};
    const Complex ax{0.9, 0.0};
    const StateVector state = coherent_state(space, ax, ph * std::conj(ax));
    const auto rep = factorization_check(state, ph, FactorizationKind::Hops, 3);
    // With a real alpha_x the measured hops ratios reduce to
    // conj(p_h)^m_y p_h^n_y as well; the conj(p_h)^m_y p_h^n_x convention
    // is tabulated for comparison.
    sink.add(suite, "hops: measured ratios (real alpha_x)",
             rep.max_dev_derived, kFactorizationTol, false,
             "ratios carry the x-mode phase for complex alpha_x");
    std::ostringstream note;
    note << "conj(p)^m_y p^n_x convention deviates by " << rep.max_dev_alt;
    sink.add(suite, "hops: conj(p)^m_y p^n_x convention (recorded)",
             rep.max_dev_alt, kFactorizationTol, false, note.str());
  }
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options, const GridFixture& grid) {
  VerifyReport report;
  Sink sink(&report);

  commutator_suites(sink, options.algebra_n_max);

  try {
    MomentOracle oracle(make_fock_space(options.n_max));
    product_suite(sink, grid, oracle);
    moment_suites(sink, grid, oracle);
    squeezing_suite(sink, grid, oracle);
  } catch (const Error& e) {
    sink.add_failed("oracle_setup", "construct moment oracle", e.what());
  }

  ihop_suite(sink, grid);
  critical_time_suite(sink, grid);
  factorization_suite(sink, options.n_max);

  return report;
}

void write_text(const VerifyReport& report, std::ostream& out) {
  std::string current;
  int pass = 0, fail = 0, info = 0;
  for (const auto& row : report.rows) {
    if (row.suite != current) {
      current = row.suite;
      out << "\n== " << current << " ==\n";
    }
    const char* tag = row.mandated ? (row.pass ? "PASS" : "FAIL")
                                   : (row.pass ? "info" : "INFO");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", row.deviation);
    out << "  [" << tag << "] " << row.name << "  dev=" << buf
        << " tol=" << row.tolerance;
    if (!row.note.empty()) out << "  -- " << row.note;
    out << "\n";
    if (!row.mandated) {
      ++info;
    } else if (row.pass) {
      ++pass;
    } else {
      ++fail;
    }
  }
  out << "\nmandated checks: " << pass << " passed, " << fail << " failed ("
      << info << " informational rows)\n";
  out << "overall: " << (report.mandated_pass() ? "PASS" : "FAIL") << "\n";
}

void write_csv(const VerifyReport& report, std::ostream& out) {
  out << "suite,name,deviation,tolerance,pass,mandated,note\n";
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += "\"\"";
      else q += c;
    }
    return q + "\"";
  };
  char buf[64];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", row.deviation);
    out << row.suite << ',' << quote(row.name) << ',' << buf << ','
        << row.tolerance << ',' << (row.pass ? 1 : 0) << ','
        << (row.mandated ? 1 : 0) << ',' << quote(row.note) << "\n";
  }
}

}  // namespace hops
