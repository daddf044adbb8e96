#include "hops/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hops {

namespace {

constexpr int kMinPhases = 4;

void check_phases(int n_phases, const char* what) {
  if (n_phases < kMinPhases) {
    std::ostringstream msg;
    msg << what << ": n_phases = " << n_phases << " too small; need >= "
        << kMinPhases << " for an exact second-order phase average";
    throw PreconditionError(msg.str());
  }
}

/// Member amplitudes (A_x, A_y) of one ensemble realization.
std::pair<Complex, Complex> hops_member(const HopsEnsembleSpec& spec,
                                        double zeta, double a0) {
  const Complex ax = std::polar(a0 * std::cos(0.5 * spec.chi_h),
                                zeta + 0.5 * spec.delta_h);
  const Complex ay = std::polar(a0 * std::sin(0.5 * spec.chi_h),
                                -zeta + 0.5 * spec.delta_h);
  return {ax, ay};
}

std::pair<Complex, Complex> polarized_member(const PolarizedFieldSpec& spec,
                                             double phi, double a0) {
  const Complex ax = std::polar(a0 * std::cos(0.5 * spec.chi0),
                                phi - 0.5 * spec.delta0);
  const Complex ay = std::polar(a0 * std::sin(0.5 * spec.chi0),
                                phi + 0.5 * spec.delta0);
  return {ax, ay};
}

struct Accumulator {
  double abs_x2 = 0.0, abs_y2 = 0.0;
  Complex conj_y_x{0.0, 0.0};  // <conj(A_y) A_x>
  Complex y_x{0.0, 0.0};       // <A_y A_x>
  int count = 0;

  void add(const std::pair<Complex, Complex>& amps) {
    const auto& [ax, ay] = amps;
    abs_x2 += std::norm(ax);
    abs_y2 += std::norm(ay);
    conj_y_x += std::conj(ay) * ax;
    y_x += ay * ax;
    ++count;
  }

  EnsembleParameters finish(Estimator est) const {
    const double inv = 1.0 / count;
    EnsembleParameters p;
    p.s[0] = (abs_y2 + abs_x2) * inv;
    p.s[1] = (abs_y2 - abs_x2) * inv;
    p.s[2] = 2.0 * (conj_y_x * inv).real();
    p.s[3] = 2.0 * (conj_y_x * inv).imag();
    p.h[0] = p.s[0];
    p.h[1] = p.s[1];
    p.h[2] = 2.0 * (y_x * inv).real();
    p.h[3] = 2.0 * (y_x * inv).imag();
    p.estimator = est;
    p.n_samples = count;
    return p;
  }
};

double phase_sample(int m, int n_phases) {
  return 2.0 * std::numbers::pi * m / n_phases;
}

}  // namespace

EnsembleParameters classical_parameters(const HopsEnsembleSpec& spec) {
  check_phases(spec.n_phases, "classical_parameters");
  Accumulator acc;
  for (int m = 0; m < spec.n_phases; ++m) {
    acc.add(hops_member(spec, phase_sample(m, spec.n_phases), spec.a0));
  }
  return acc.finish(Estimator::ExactPhaseAverage);
}

EnsembleParameters classical_parameters(const PolarizedFieldSpec& spec) {
  check_phases(spec.n_phases, "classical_parameters");
  Accumulator acc;
  for (int m = 0; m < spec.n_phases; ++m) {
    acc.add(polarized_member(spec, phase_sample(m, spec.n_phases), spec.a0));
  }
  return acc.finish(Estimator::ExactPhaseAverage);
}

EnsembleParameters classical_parameters_mc(const HopsEnsembleSpec& spec,
                                           int n_samples, std::uint64_t seed,
                                           const AmplitudeSampler& amplitude) {
  if (n_samples < 1) throw PreconditionError("classical_parameters_mc: n_samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  Accumulator acc;
  for (int i = 0; i < n_samples; ++i) {
    const double zeta = phase(rng);
    const double a0 = amplitude ? amplitude(rng) : spec.a0;
    acc.add(hops_member(spec, zeta, a0));
  }
  return acc.finish(Estimator::MonteCarlo);
}

EnsembleParameters classical_parameters_mc(const PolarizedFieldSpec& spec,
                                           int n_samples, std::uint64_t seed,
                                           const AmplitudeSampler& amplitude) {
  if (n_samples < 1) throw PreconditionError("classical_parameters_mc: n_samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  Accumulator acc;
  for (int i = 0; i < n_samples; ++i) {
    const double phi = phase(rng);
    const double a0 = amplitude ? amplitude(rng) : spec.a0;
    acc.add(polarized_member(spec, phi, a0));
  }
  return acc.finish(Estimator::MonteCarlo);
}

std::vector<std::pair<double, StateVector>> quantum_phase_averaged_state(
    const FockSpace& space, const HopsEnsembleSpec& spec) {
  check_phases(spec.n_phases, "quantum_phase_averaged_state");
  std::vector<std::pair<double, StateVector>> mixture;
  mixture.reserve(spec.n_phases);
  const double weight = 1.0 / spec.n_phases;
  for (int m = 0; m < spec.n_phases; ++m) {
    const auto [ax, ay] = hops_member(spec, phase_sample(m, spec.n_phases), spec.a0);
    mixture.emplace_back(weight, coherent_state(space, ax, ay));
  }
  return mixture;
}

std::vector<std::pair<double, StateVector>> quantum_phase_averaged_state(
    const FockSpace& space, const PolarizedFieldSpec& spec) {
  check_phases(spec.n_phases, "quantum_phase_averaged_state");
  std::vector<std::pair<double, StateVector>> mixture;
  mixture.reserve(spec.n_phases);
  const double weight = 1.0 / spec.n_phases;
  for (int m = 0; m < spec.n_phases; ++m) {
    const auto [ax, ay] =
        polarized_member(spec, phase_sample(m, spec.n_phases), spec.a0);
    mixture.emplace_back(weight, coherent_state(space, ax, ay));
  }
  return mixture;
}

Complex ensemble_expectation(
    const std::vector<std::pair<double, StateVector>>& mixture,
    const OperatorMatrix& op) {
  Complex acc{0.0, 0.0};
  for (const auto& [weight, state] : mixture) {
    acc += weight * expectation(state, op);
  }
  return acc;
}

namespace {

EnsembleParameters quantum_params_of(
    const FockSpace& space,
    const std::vector<std::pair<double, StateVector>>& mixture) {
  const OperatorQuad s = stokes_operators(space);
  const OperatorQuad h = hidden_operators(space, 0.0);
  EnsembleParameters p;
  p.s = {ensemble_expectation(mixture, s.o0).real(),
         ensemble_expectation(mixture, s.o1).real(),
         ensemble_expectation(mixture, s.o2).real(),
         ensemble_expectation(mixture, s.o3).real()};
  p.h = {ensemble_expectation(mixture, h.o0).real(),
         ensemble_expectation(mixture, h.o1).real(),
         ensemble_expectation(mixture, h.o2).real(),
         ensemble_expectation(mixture, h.o3).real()};
  p.estimator = Estimator::ExactPhaseAverage;
  p.n_samples = static_cast<int>(mixture.size());
  return p;
}

}  // namespace

EnsembleParameters quantum_parameters(const FockSpace& space,
                                      const HopsEnsembleSpec& spec) {
  return quantum_params_of(space, quantum_phase_averaged_state(space, spec));
}

EnsembleParameters quantum_parameters(const FockSpace& space,
                                      const PolarizedFieldSpec& spec) {
  return quantum_params_of(space, quantum_phase_averaged_state(space, spec));
}

Complex iop_in_basis(const PolarizedFieldSpec& spec, const BasisVector& e) {
  make_basis_vector(e.ex, e.ey);
  // Direction of the polarized field, e0 = (cos(chi0/2) e^{-i delta0/2},
  //                                         sin(chi0/2) e^{+i delta0/2}).
  const Complex e0x = std::polar(std::cos(0.5 * spec.chi0), -0.5 * spec.delta0);
  const Complex e0y = std::polar(std::sin(0.5 * spec.chi0), +0.5 * spec.delta0);
  const BasisVector ep = e.orthogonal();
  const Complex denom = std::conj(e.ex) * e0x + std::conj(e.ey) * e0y;
  if (std::abs(denom) <= 1e-12) {
    throw PreconditionError(
        "iop_in_basis: light lies entirely in e_perp (e^* . e0 = 0)");
  }
  const Complex numer = std::conj(ep.ex) * e0x + std::conj(ep.ey) * e0y;
  return numer / denom;
}

}  // namespace hops
