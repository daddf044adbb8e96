#include "hops/moments.hpp"

#include <cmath>
#include <sstream>

namespace hops {

namespace {

constexpr double kOnsetKtMax = 2.0;
constexpr double kOnsetKtTol = 1e-10;
constexpr double kConsistencyMargin = 1e-9;

void check_input(const HopsInput& inp) {
  if (!(inp.ax_sq >= 0.0) || !(inp.ph_mag >= 0.0) ||
      !std::isfinite(inp.delta_h)) {
    throw PreconditionError("HopsInput: ax_sq and ph_mag must be finite and nonnegative");
  }
}

struct MomentTerms {
  double total;    // A = ax_sq (1 + ph^2)
  double mixed;    // m = 2 ax_sq ph
  double sin_d;
  double cos_d;
};

MomentTerms terms_of(const HopsInput& inp) {
  return MomentTerms{inp.ax_sq * (1.0 + inp.ph_mag * inp.ph_mag),
                     2.0 * inp.ax_sq * inp.ph_mag, std::sin(inp.delta_h),
                     std::cos(inp.delta_h)};
}

}  // namespace

std::pair<Complex, Complex> reconstruct_amplitudes(const HopsInput& inp,
                                                   double zeta) {
  check_input(inp);
  const double a = std::sqrt(inp.ax_sq);
  const Complex alpha_x = std::polar(a, zeta + 0.5 * inp.delta_h);
  const Complex alpha_y = std::polar(inp.ph_mag * a, -zeta + 0.5 * inp.delta_h);
  return {alpha_x, alpha_y};
}

HiddenMoments hidden_moments(const HopsInput& inp, double kt) {
  check_input(inp);
  const BogoliubovCoeffs c = bogoliubov(kt);
  const MomentTerms t = terms_of(inp);
  HiddenMoments h;
  h.h0 = t.total * c.c4 - t.mixed * c.s4 * t.sin_d + 2.0 * c.s2 * c.s2;
  h.h1 = inp.ax_sq * (inp.ph_mag * inp.ph_mag - 1.0);
  h.h2 = t.mixed * t.cos_d;
  h.h3 = t.mixed * c.c4 * t.sin_d - (1.0 + t.total) * c.s4;
  return h;
}

HiddenVariances hidden_variances(const HopsInput& inp, double kt,
                                 VarianceSource source, int n_max) {
  check_input(inp);
  if (source == VarianceSource::Oracle) {
    return MomentOracle(make_fock_space(n_max)).variances(inp, kt);
  }
  const BogoliubovCoeffs c = bogoliubov(kt);
  const MomentTerms t = terms_of(inp);
  HiddenVariances v;
  v.source = VarianceSource::ClosedForm;
  v.v0 = t.total * c.c8() - t.mixed * c.s8() * t.sin_d + c.s4 * c.s4;
  v.v1 = t.total;
  v.v2 = 1.0 + t.total;
  v.v3 = v.v0 - 1.0;  // verbatim closed form; measured value is v0 + 1
  v.v3_nonphysical = v.v3 < 0.0;
  return v;
}

double hidden_variance_h3_measured(const HopsInput& inp, double kt) {
  return hidden_variances(inp, kt, VarianceSource::ClosedForm).v0 + 1.0;
}

double squeezing_function(const HopsInput& inp, double kt) {
  check_input(inp);
  const BogoliubovCoeffs c = bogoliubov(kt);
  if (inp.ax_sq == 0.0 || inp.ph_mag == 0.0) {
    return std::abs(c.c4);  // correction term vanishes in either limit
  }
  const double denom =
      inp.ph_mag + (1.0 + 1.0 / inp.ax_sq) / inp.ph_mag;
  return std::abs(c.c4 - 2.0 * c.s4 * std::sin(inp.delta_h) / denom);
}

SqueezingReport squeezing_report(const HopsInput& inp, double kt,
                                 std::optional<int> oracle_n_max) {
  check_input(inp);
  SqueezingReport rep;
  rep.sq = squeezing_function(inp, kt);
  rep.squeezed_h2 = rep.sq > 1.0;

  const HiddenMoments h = hidden_moments(inp, kt);
  double v0, v2, v3;
  if (oracle_n_max) {
    const HiddenVariances v =
        MomentOracle(make_fock_space(*oracle_n_max)).variances(inp, kt);
    v0 = v.v0;
    v2 = v.v2;
    v3 = v.v3;
    rep.margin_source = VarianceSource::Oracle;
  } else {
    const HiddenVariances v =
        hidden_variances(inp, kt, VarianceSource::ClosedForm);
    v0 = v.v0;
    v2 = v.v2;
    v3 = hidden_variance_h3_measured(inp, kt);
    rep.margin_source = VarianceSource::ClosedForm;
  }

  const double b_h3 = std::abs(h.h3);
  const double b_1h0 = std::abs(1.0 + h.h0);
  const double b_h2 = std::abs(h.h2);
  rep.inequality_margins = {v0 - b_h3, v2 - b_h3, v2 - b_1h0,
                            v3 - b_1h0, v3 - b_h2, v0 - b_h2};

  const double h2_margin = v2 - b_1h0;
  if (std::abs(rep.sq - 1.0) <= kConsistencyMargin) {
    rep.consistent = true;  // on the criterion boundary
  } else {
    rep.consistent = (rep.squeezed_h2 == (h2_margin < 0.0));
  }
  return rep;
}

double degree_hidden(const HopsInput& inp, double kt) {
  const HiddenMoments h = hidden_moments(inp, kt);
  if (!(h.h0 > 0.0)) {
    std::ostringstream msg;
    msg << "degree_hidden: h0 = " << h.h0 << " is not positive";
    throw PreconditionError(msg.str());
  }
  return std::sqrt(h.h1 * h.h1 + h.h2 * h.h2 + h.h3 * h.h3) / h.h0;
}

namespace {

void check_onset_input(const HopsInput& inp, double k) {
  if (!(inp.ph_mag > 0.0) || !(inp.ax_sq > 0.0)) {
    throw PreconditionError("critical time: ph_mag and ax_sq must be positive");
  }
  if (!(k > 0.0)) {
    throw PreconditionError("critical time: coupling k must be positive");
  }
}

}  // namespace

std::optional<double> critical_time(const HopsInput& inp, double k) {
  check_onset_input(inp, k);
  const double sin_d = std::sin(inp.delta_h);
  if (sin_d <= 0.0) return std::nullopt;
  const double arg = inp.ph_mag * sin_d /
                     (2.0 * (1.0 / inp.ax_sq + 1.0 +
                             inp.ph_mag * inp.ph_mag));
  return std::atanh(arg) / (2.0 * k);
}

std::optional<double> onset_time_closed(const HopsInput& inp, double k) {
  check_onset_input(inp, k);
  const double sin_d = std::sin(inp.delta_h);
  if (sin_d <= 0.0) return std::nullopt;
  const double total = inp.ax_sq * (1.0 + inp.ph_mag * inp.ph_mag);
  const double arg =
      2.0 * inp.ax_sq * inp.ph_mag * sin_d / (1.0 + total);
  if (arg >= 1.0) {
    throw PreconditionError("onset_time_closed: atanh argument reached 1");
  }
  return std::atanh(arg) / (2.0 * k);
}

double onset_time_numeric(const HopsInput& inp, double k) {
  check_onset_input(inp, k);

  // Bisect on the sign of h1^2 + h2^2 + h3^2 - h0^2, which crosses zero
  // exactly where the degree crosses 1 and is cheaper and better
  // conditioned than the quotient.
  auto excess = [&inp](double kt) {
    const HiddenMoments h = hidden_moments(inp, kt);
    return h.h1 * h.h1 + h.h2 * h.h2 + h.h3 * h.h3 - h.h0 * h.h0;
  };

  double lo = 1e-9;
  if (excess(lo) >= 0.0) {
    return 0.0;  // nonclassical immediately for t > 0
  }
  double hi = kOnsetKtMax;
  if (excess(hi) < 0.0) {
    throw PreconditionError(
        "onset_time_numeric: no degree = 1 crossing for kt in (0, 2]");
  }
  while (hi - lo > kOnsetKtTol) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / k;
}

MomentOracle::MomentOracle(const FockSpace& space)
    : space_(space), quad_(hidden_operators(space, 0.0)), evolver_(space) {}

StateVector MomentOracle::evolved_state(const HopsInput& inp, double kt,
                                        double zeta) const {
  const auto [alpha_x, alpha_y] = reconstruct_amplitudes(inp, zeta);
  const StateVector initial = coherent_state(space_, alpha_x, alpha_y);
  // Oracle coupling g = 2k so that the amplitude mixing factor is
  // cosh(2kt); run with k = 1, t = kt.
  return evolver_.evolve(initial, 2.0, kt);
}

HiddenMoments MomentOracle::moments_of(const StateVector& state) const {
  return HiddenMoments{expectation(state, quad_.o0).real(),
                       expectation(state, quad_.o1).real(),
                       expectation(state, quad_.o2).real(),
                       expectation(state, quad_.o3).real()};
}

HiddenVariances MomentOracle::variances_of(const StateVector& state) const {
  HiddenVariances v;
  v.v0 = variance(state, quad_.o0);
  v.v1 = variance(state, quad_.o1);
  v.v2 = variance(state, quad_.o2);
  v.v3 = variance(state, quad_.o3);
  v.source = VarianceSource::Oracle;
  v.v3_nonphysical = false;
  return v;
}

HiddenMoments MomentOracle::moments(const HopsInput& inp, double kt,
                                    double zeta) const {
  return moments_of(evolved_state(inp, kt, zeta));
}

HiddenVariances MomentOracle::variances(const HopsInput& inp, double kt,
                                        double zeta) const {
  return variances_of(evolved_state(inp, kt, zeta));
}

}  // namespace hops
