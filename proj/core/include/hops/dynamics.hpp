#ifndef HOPS_DYNAMICS_HPP
#define HOPS_DYNAMICS_HPP

#include <utility>

#include "hops/fock.hpp"

namespace hops {

/// Hyperbolic coefficients of the degenerate parametric amplifier at
/// dimensionless interaction time kt, with the convention that the
/// amplitude mixing coefficient is cosh(2kt).  The matching oracle
/// coupling is g = 2k.
struct BogoliubovCoeffs {
  double kt;
  double c2;  // cosh(2kt)
  double s2;  // sinh(2kt)
  double c4;  // cosh(4kt)
  double s4;  // sinh(4kt)
  double t2;  // tanh(2kt)
  double c8() const;  // cosh(8kt), on demand
  double s8() const;  // sinh(8kt)
};

/// |kt| <= 5 (overflow guard).
BogoliubovCoeffs bogoliubov(double kt);

/// Rotating-frame mean amplitudes after interaction time kt:
///   alpha_x(t) = c2 alpha_x - i s2 conj(alpha_y)
///   alpha_y(t) = c2 alpha_y - i s2 conj(alpha_x)
struct EvolvedAmplitudes {
  Complex alpha_x_t;
  Complex alpha_y_t;
};

EvolvedAmplitudes evolve_amplitudes(Complex alpha_x, Complex alpha_y,
                                    double kt);

/// Evolved index of hidden polarization,
///   p_h(t) = (p_h - i T2) / (1 + i p_h T2),  T2 = tanh(2kt),
/// identical to ihop_of applied to the evolved mean amplitudes.  Throws
/// MobiusPoleError when |1 + i p_h T2| <= 1e-12 (the evolved x-amplitude
/// mean vanishes there).
Complex ihop_evolve(Complex p_h, double kt);

/// Heisenberg-picture ladder pair
///   A_x(t) = c2 a_x - i s2 a_y^dag,  A_y(t) = c2 a_y - i s2 a_x^dag
/// for expectation checks against the Schroedinger-picture evolver.
std::pair<OperatorMatrix, OperatorMatrix> heisenberg_pair(
    const FockSpace& space, double kt);

}  // namespace hops

#endif  // HOPS_DYNAMICS_HPP
