#ifndef HOPS_MOMENTS_HPP
#define HOPS_MOMENTS_HPP

#include <array>
#include <optional>
#include <utility>

#include "hops/dynamics.hpp"
#include "hops/fock.hpp"
#include "hops/polarization.hpp"

namespace hops {

/// Pump specification: mean photon number of the x mode, magnitude of the
/// hidden polarization index, and the phase sum delta_h in (-pi, pi].
/// Amplitudes are reconstructed as
///   alpha_x = sqrt(ax_sq) e^{i(zeta + delta_h/2)},
///   alpha_y = ph_mag sqrt(ax_sq) e^{i(-zeta + delta_h/2)},
/// so that p_h = ph_mag e^{i delta_h} for every value of the free phase
/// zeta (zeta = 0 is the canonical choice; all moments are zeta-free).
struct HopsInput {
  double ax_sq;
  double ph_mag;
  double delta_h;
};

std::pair<Complex, Complex> reconstruct_amplitudes(const HopsInput& inp,
                                                   double zeta = 0.0);

/// Closed-form expectations of the hidden quad after interaction time kt.
struct HiddenMoments {
  double h0, h1, h2, h3;
};

HiddenMoments hidden_moments(const HopsInput& inp, double kt);

enum class VarianceSource { ClosedForm, Oracle };

/// Dispersions of the hidden quad.  The ClosedForm path evaluates the
/// closed expressions verbatim; its v3 differs from the measured variance
/// by a constant -2 and can go negative, in which case v3_nonphysical is
/// set.  The Oracle path evaluates variances on the evolved truncated
/// state and is always nonnegative.
struct HiddenVariances {
  double v0, v1, v2, v3;
  VarianceSource source;
  bool v3_nonphysical;
};

HiddenVariances hidden_variances(const HopsInput& inp, double kt,
                                 VarianceSource source, int n_max = 24);

/// Closed form that reproduces the measured (oracle) v3; it equals the
/// verbatim closed v3 plus 2, and also equals v0 + 1.
double hidden_variance_h3_measured(const HopsInput& inp, double kt);

/// Squeezing function
///   Sq = | c4 - 2 s4 sin(delta_h) / (|p_h| + |p_h|^-1 (1 + |alpha_x|^-2)) |.
/// Values above 1 are equivalent to var(H2) < |1 + h0(t)|.  The limits
/// ax_sq = 0 or ph_mag = 0 return |c4| (the correction term vanishes).
double squeezing_function(const HopsInput& inp, double kt);

/// Squeezing verdict plus the six dispersion-inequality margins
/// (left minus right, negative means squeezed by that inequality):
///   [0] var(H0) - |h3|    [1] var(H2) - |h3|
///   [2] var(H2) - |1+h0|  [3] var(H3) - |1+h0|
///   [4] var(H3) - |h2|    [5] var(H0) - |h2|
struct SqueezingReport {
  double sq;
  bool squeezed_h2;  // sq > 1
  std::array<double, 6> inequality_margins;
  VarianceSource margin_source;
  bool consistent;  // squeezed_h2 == (var(H2) < |1 + h0|), within 1e-9
};

/// With oracle_n_max set, margins use variances measured on the evolved
/// truncated state (TruncationError when the cutoff cannot hold the
/// input); otherwise the measured-equivalent closed forms are used.
SqueezingReport squeezing_report(const HopsInput& inp, double kt,
                                 std::optional<int> oracle_n_max = {});

/// Degree of hidden polarization sqrt(h1^2 + h2^2 + h3^2) / h0; equals 1
/// at kt = 0 and values above 1 signal nonclassicality.
double degree_hidden(const HopsInput& inp, double kt);

/// Closed-form critical time
///   t0 = atanh[ |p_h| sin(delta_h) / (2 (ax_sq^-1 + 1 + |p_h|^2)) ] / (2k),
/// or nullopt when sin(delta_h) <= 0 (the degree exceeds 1 immediately).
/// Note: this expression does NOT agree with the numeric onset of
/// degree > 1; its atanh argument is exactly 4x smaller than the one the
/// closed-form moments imply.  onset_time_numeric and onset_time_closed
/// carry the measured behaviour; the verify report tabulates all three.
std::optional<double> critical_time(const HopsInput& inp, double k);

/// Closed form matching the numeric onset:
///   t0 = atanh[ 2 ax_sq |p_h| sin(delta_h) /
///               (1 + ax_sq (1 + |p_h|^2)) ] / (2k).
std::optional<double> onset_time_closed(const HopsInput& inp, double k);

/// Bisection root of degree_hidden(inp, kt) = 1 on kt in (0, 2], to 1e-10
/// in kt; returns 0 when the degree exceeds 1 for all t > 0, throws
/// PreconditionError when no crossing exists in range.
double onset_time_numeric(const HopsInput& inp, double k);

/// Truncated-Fock reference for HopsInput evolution: builds the hidden
/// quad and the pair evolver once and measures moments and variances on
/// the numerically evolved state.
class MomentOracle {
 public:
  explicit MomentOracle(const FockSpace& space);

  StateVector evolved_state(const HopsInput& inp, double kt,
                            double zeta = 0.0) const;
  HiddenMoments moments(const HopsInput& inp, double kt,
                        double zeta = 0.0) const;
  HiddenVariances variances(const HopsInput& inp, double kt,
                            double zeta = 0.0) const;

  HiddenMoments moments_of(const StateVector& state) const;
  HiddenVariances variances_of(const StateVector& state) const;

  const FockSpace& space() const { return space_; }
  const OperatorQuad& quad() const { return quad_; }
  const PairEvolver& evolver() const { return evolver_; }

 private:
  FockSpace space_;
  OperatorQuad quad_;
  PairEvolver evolver_;
};

}  // namespace hops

#endif  // HOPS_MOMENTS_HPP
