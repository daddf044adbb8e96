#ifndef HOPS_SWEEP_HPP
#define HOPS_SWEEP_HPP

#include <array>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hops/moments.hpp"

namespace hops {

/// Grid sweep over interaction time kt and phase sum delta_h at fixed pump
/// (ax_sq, ph_mag).  Oracle columns evaluate the same quantities on the
/// numerically evolved truncated state at cutoff n_max.  The default delta
/// grid is the half-open (-pi, pi] lattice with spacing 2 pi / 72.
struct SweepConfig {
  double ax_sq = 1.0;
  double ph_mag = 1.0;
  double kt_min = 0.0;
  double kt_max = 1.0;
  int kt_steps = 50;
  double delta_min = -std::numbers::pi + 2.0 * std::numbers::pi / 72.0;
  double delta_max = std::numbers::pi;
  int delta_steps = 72;
  bool oracle = false;
  int n_max = 24;
  int threads = 0;  // 0: hardware concurrency
};

/// Presets mirroring the equal-intensity and 25x-intensity pump surfaces:
/// kt in [0, 1] x 50, delta_h on the half-open (-pi, pi] lattice x 72.
SweepConfig preset_fig1a();
SweepConfig preset_fig1b();

struct SweepRow {
  double kt;
  double delta_h;
  double sq;
  double h0, h1, h2, h3;
  double v0, v1, v2, v3;  // closed form (v3 verbatim, may be negative)
  double degree;          // NaN when h0 is not positive
  bool squeezed;          // sq > 1
  std::optional<double> t0;  // closed-form critical time (k = 1)
  bool has_oracle = false;
  std::array<double, 4> oracle_h{};
  std::array<double, 4> oracle_v{};
  bool oracle_overflow = false;
};

/// Throws ConfigError on invalid configuration.  Rows are ordered by
/// (kt, delta_h) regardless of thread count; identical configs produce
/// identical rows.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Fixed column order:
///   kt,delta_h,sq,h0,h1,h2,h3,v0,v1,v2,v3,degree,squeezed,t0
/// followed, when oracle columns are enabled, by
///   oracle_h0..oracle_h3,oracle_v0..oracle_v3,oracle_overflow.
/// Floats carry 17 significant digits; t0 is empty when undefined.
void write_sweep_csv(const std::vector<SweepRow>& rows, bool oracle_columns,
                     std::ostream& out);

/// JSON sidecar describing a sweep (config echo, column list, format
/// version); deterministic, no timestamps.
std::string sweep_metadata_json(const SweepConfig& config);

std::vector<double> linspace(double lo, double hi, int steps);

}  // namespace hops

#endif  // HOPS_SWEEP_HPP
