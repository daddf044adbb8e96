#ifndef HOPS_ENSEMBLES_HPP
#define HOPS_ENSEMBLES_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "hops/fock.hpp"
#include "hops/polarization.hpp"

namespace hops {

/// Hidden-polarized ensemble: fixed amplitude a0, fixed angle parameters
/// chi_h in [0, pi] and delta_h in (-pi, pi], and M equally spaced samples
/// of the random phase zeta.  Member amplitudes:
///   A_e      = a0 cos(chi_h/2) e^{i( zeta + delta_h/2)}
///   A_e_perp = a0 sin(chi_h/2) e^{i(-zeta + delta_h/2)}
/// The phase DIFFERENCE is random, the SUM is pinned to delta_h.
struct HopsEnsembleSpec {
  double a0;
  double chi_h;
  double delta_h;
  int n_phases;
};

/// Ordinary polarized ensemble: one random common phase phi, pinned
/// amplitude ratio and phase difference delta0.  Member amplitudes:
///   A_x = a0 cos(chi0/2) e^{i(phi - delta0/2)}
///   A_y = a0 sin(chi0/2) e^{i(phi + delta0/2)}
struct PolarizedFieldSpec {
  double a0;
  double chi0;
  double delta0;
  int n_phases;
};

enum class Estimator { ExactPhaseAverage, MonteCarlo };

/// Phase-averaged Stokes values s0..s3 and hidden values h0..h3:
///   s0,1 = <|A_y|^2 +- |A_x|^2>,  s2 + i s3 = 2 <conj(A_y) A_x>,
///   h0,1 = s0,1,                  h2 + i h3 = 2 <A_y A_x>.
struct EnsembleParameters {
  std::array<double, 4> s;
  std::array<double, 4> h;
  Estimator estimator;
  int n_samples;
};

/// Deterministic M-point phase average; exact for these second-order
/// trigonometric moments once M >= 3, enforced at M >= 4.
EnsembleParameters classical_parameters(const HopsEnsembleSpec& spec);
EnsembleParameters classical_parameters(const PolarizedFieldSpec& spec);

/// Optional hook for a random amplitude distribution; default keeps a0
/// fixed.
using AmplitudeSampler = std::function<double(std::mt19937_64&)>;

EnsembleParameters classical_parameters_mc(const HopsEnsembleSpec& spec,
                                           int n_samples, std::uint64_t seed,
                                           const AmplitudeSampler& amplitude = {});
EnsembleParameters classical_parameters_mc(const PolarizedFieldSpec& spec,
                                           int n_samples, std::uint64_t seed,
                                           const AmplitudeSampler& amplitude = {});

/// The quantized ensemble: M equally weighted coherent states over the
/// zeta grid, representing the phase-averaged mixture.
std::vector<std::pair<double, StateVector>> quantum_phase_averaged_state(
    const FockSpace& space, const HopsEnsembleSpec& spec);
std::vector<std::pair<double, StateVector>> quantum_phase_averaged_state(
    const FockSpace& space, const PolarizedFieldSpec& spec);

Complex ensemble_expectation(
    const std::vector<std::pair<double, StateVector>>& mixture,
    const OperatorMatrix& op);

/// Stokes and hidden values measured on the quantized mixture.
EnsembleParameters quantum_parameters(const FockSpace& space,
                                      const HopsEnsembleSpec& spec);
EnsembleParameters quantum_parameters(const FockSpace& space,
                                      const PolarizedFieldSpec& spec);

/// Index of polarization of the polarized field in the basis (e, e_perp):
///   p = (e_perp^* . e0) / (e^* . e0).
/// Throws PreconditionError when the light lies entirely in e_perp.
Complex iop_in_basis(const PolarizedFieldSpec& spec, const BasisVector& e);

}  // namespace hops

#endif  // HOPS_ENSEMBLES_HPP
