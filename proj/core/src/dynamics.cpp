#include "hops/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace hops {

namespace {
constexpr double kKtGuard = 5.0;
constexpr double kPoleTol = 1e-12;
}  // namespace

double BogoliubovCoeffs::c8() const { return std::cosh(8.0 * kt); }
double BogoliubovCoeffs::s8() const { return std::sinh(8.0 * kt); }

BogoliubovCoeffs bogoliubov(double kt) {
  if (!(std::abs(kt) <= kKtGuard)) {
    std::ostringstream msg;
    msg << "bogoliubov: |kt| = " << std::abs(kt) << " exceeds guard " << kKtGuard;
    throw PreconditionError(msg.str());
  }
  BogoliubovCoeffs c;
  c.kt = kt;
  c.c2 = std::cosh(2.0 * kt);
  c.s2 = std::sinh(2.0 * kt);
  c.c4 = std::cosh(4.0 * kt);
  c.s4 = std::sinh(4.0 * kt);
  c.t2 = std::tanh(2.0 * kt);
  return c;
}

EvolvedAmplitudes evolve_amplitudes(Complex alpha_x, Complex alpha_y,
                                    double kt) {
  const BogoliubovCoeffs c = bogoliubov(kt);
  const Complex mi{0.0, -1.0};
  return EvolvedAmplitudes{
      c.c2 * alpha_x + mi * c.s2 * std::conj(alpha_y),
      c.c2 * alpha_y + mi * c.s2 * std::conj(alpha_x)};
}

Complex ihop_evolve(Complex p_h, double kt) {
  const BogoliubovCoeffs c = bogoliubov(kt);
  const Complex i{0.0, 1.0};
  const Complex denom = 1.0 + i * p_h * c.t2;
  if (std::abs(denom) <= kPoleTol) {
    std::ostringstream msg;
    msg << "ihop_evolve: Moebius pole at p_h = (" << p_h.real() << ", "
        << p_h.imag() << "), kt = " << kt
        << " (evolved x-amplitude mean vanishes)";
    throw MobiusPoleError(msg.str());
  }
  return (p_h - i * c.t2) / denom;
}

std::pair<OperatorMatrix, OperatorMatrix> heisenberg_pair(
    const FockSpace& space, double kt) {
  const BogoliubovCoeffs c = bogoliubov(kt);
  const OperatorMatrix ax = mode_operator(space, Mode::X, LadderKind::Annihilate);
  const OperatorMatrix ay = mode_operator(space, Mode::Y, LadderKind::Annihilate);
  const Complex mis{0.0, -c.s2};
  OperatorMatrix a_x_t = Complex(c.c2, 0.0) * ax + mis * adjoint(ay);
  OperatorMatrix a_y_t = Complex(c.c2, 0.0) * ay + mis * adjoint(ax);
  return {std::move(a_x_t), std::move(a_y_t)};
}

}  // namespace hops
