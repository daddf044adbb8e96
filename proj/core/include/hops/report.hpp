#ifndef HOPS_REPORT_HPP
#define HOPS_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "hops/moments.hpp"

namespace hops {

/// Pinned verification grid: pump points, interaction times, and the free
/// phase used for the zeta-independence cross-check.
struct GridFixture {
  std::vector<HopsInput> points;
  std::vector<double> kts;
  double zeta_check = 0.7;
};

/// Parses the JSON fixture ({"points": [{"ax_sq":..,"ph_mag":..,
/// "delta_h":..}, ...], "kt": [...], "zeta_check": ...}).  Throws
/// ConfigError on unreadable or malformed input.
GridFixture load_grid_fixture(const std::string& path);

struct CheckRow {
  std::string suite;
  std::string name;
  double deviation;
  double tolerance;
  bool pass;
  bool mandated;  // informational rows never fail the report
  std::string note;
};

struct VerifyReport {
  std::vector<CheckRow> rows;
  bool mandated_pass() const;
};

struct VerifyOptions {
  int n_max = 24;         // oracle cutoff for the moment/variance suites
  int algebra_n_max = 8;  // cutoff for the operator-identity suites
};

/// Runs every verification suite:
///   - hidden commutators and the quad identity (measured signs recorded),
///   - Stokes su(2) relations,
///   - dispersion-product inequalities on coherent and evolved states,
///   - closed-form moments vs the truncated-Fock oracle over the grid,
///   - closed-form dispersions vs oracle, incl. the constant-offset table
///     for the third hidden dispersion (informational),
///   - evolved hidden-index closed form vs mean-amplitude oracle,
///   - closed-form critical time vs the numeric degree onset (the closed
///     form disagrees by a factor of 4 inside atanh; those rows fail and
///     the matching corrected form is tabulated alongside),
///   - factorization ratio tables.
VerifyReport run_verify(const VerifyOptions& options,
                        const GridFixture& grid);

void write_text(const VerifyReport& report, std::ostream& out);
void write_csv(const VerifyReport& report, std::ostream& out);

}  // namespace hops

#endif  // HOPS_REPORT_HPP
