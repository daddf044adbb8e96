#ifndef HOPS_POLARIZATION_HPP
#define HOPS_POLARIZATION_HPP

#include <array>
#include <vector>

#include "hops/fock.hpp"

namespace hops {

enum class QuadFamily { Stokes, Hidden };

/// Four hermitian quadratic operators.
///   Stokes: S0,1 = n_y +- n_x,  S2 + iS3 = 2 a_y^dag a_x.
///   Hidden: H0,1 = n_y +- n_x,  H2 + iH3 = 2 e^{2i phi} a_y a_x.
/// phase_phi is used only by the hidden family; the rotating frame makes
/// phi = 0 the canonical choice.  S0 (and H1) commute with the rest of
/// their quad as exact truncated matrices, since the off-diagonal members
/// only connect basis states of equal total (respectively, equal
/// difference of) photon number.
struct OperatorQuad {
  QuadFamily family;
  double phase_phi;
  OperatorMatrix o0, o1, o2, o3;
};

OperatorQuad stokes_operators(const FockSpace& space);
OperatorQuad hidden_operators(const FockSpace& space, double phi = 0.0);

/// Right-hand sides of the three dispersion-product inequalities for the
/// hidden quad: var(H0)var(H2) >= b_02^2, var(H2)var(H3) >= b_23^2,
/// var(H3)var(H0) >= b_30^2.
struct UncertaintyBounds {
  double b_02;  // |<H3>|
  double b_23;  // |<1 + H0>|
  double b_30;  // |<H2>|
};

UncertaintyBounds uncertainty_bounds(const StateVector& state,
                                     const OperatorQuad& quad);

struct UncertaintyProductReport {
  std::array<double, 3> products;   // var0*var2, var2*var3, var3*var0
  std::array<double, 3> bounds_sq;  // b_02^2, b_23^2, b_30^2
  std::array<double, 3> margins;    // products - bounds_sq
  bool hold;
};

/// True iff all three product inequalities hold within 1e-9.
UncertaintyProductReport uncertainty_products_hold(const StateVector& state,
                                                   const OperatorQuad& quad);

/// Index of polarization p = alpha_y / alpha_x.
Complex iop_of(Complex alpha_x, Complex alpha_y);

/// Index of hidden polarization p_h = alpha_y / conj(alpha_x).
Complex ihop_of(Complex alpha_x, Complex alpha_y);

/// Both indices with derived magnitudes and angles.  delta_h = arg(p_h) in
/// (-pi, pi]; chi_h = 2 atan(|p_h|).
struct PolarizationIndices {
  Complex iop;
  Complex ihop;
  double iop_mag;
  double ihop_mag;
  double iop_phase;
  double delta_h;
  double chi_h;
};

PolarizationIndices polarization_indices(Complex alpha_x, Complex alpha_y);

/// Unit transverse basis vector e = (ex, ey); the orthogonal complement is
/// fixed as e_perp = (-conj(ey), conj(ex)).
struct BasisVector {
  Complex ex, ey;
  BasisVector orthogonal() const { return {-std::conj(ey), std::conj(ex)}; }
};

/// Validates |ex|^2 + |ey|^2 = 1 within 1e-12.
BasisVector make_basis_vector(Complex ex, Complex ey);

/// Mode operators in the rotated basis: a_e = conj(ex) a_x + conj(ey) a_y
/// and the companion a_e_perp.  Both obey ladder commutation on the
/// projected interior.
std::pair<OperatorMatrix, OperatorMatrix> transform_basis(
    const FockSpace& space, const BasisVector& e);

/// Normal-ordered correlation
///   Gamma^{(m_x, m_y, n_x, n_y)} =
///     <a_x^dag^m_x a_y^dag^m_y a_x^n_x a_y^n_y>
/// in photon-number units, computed by repeated ladder application to the
/// state.  Requires m_x + n_x <= n_max and m_y + n_y <= n_max.
Complex glauber_gamma(const StateVector& state, int m_x, int m_y, int n_x,
                      int n_y);

enum class FactorizationKind { Polarized, Hops };

/// One exponent tuple of the factorization table.  measured_ratio is
/// Gamma / Gamma^{(M,0,N,0)}.  derived_ratio is the convention this module
/// derives for coherent inputs, conj(p)^m_y * p^n_y; alt_ratio is the
/// alternative convention conj(p)^m_y * p^m_x (polarized) or
/// conj(p)^m_y * p^n_x (hops), tabulated so the report can show where it
/// disagrees with measurement.
struct FactorizationRow {
  int m_x, m_y, n_x, n_y;
  Complex gamma;
  Complex base_gamma;  // Gamma^{(M,0,N,0)}
  Complex measured_ratio;
  Complex derived_ratio;
  Complex alt_ratio;
  double dev_derived;
  double dev_alt;
};

struct FactorizationReport {
  FactorizationKind kind;
  Complex index;
  std::vector<FactorizationRow> rows;
  double max_dev_derived;
  double max_dev_alt;
};

/// Tabulates Gamma ratios for every tuple with m_x+m_y <= max_order and
/// n_x+n_y <= max_order.  For Polarized inputs (alpha_y = p alpha_x) the
/// derived convention reproduces measurement to truncation accuracy; for
/// Hops inputs the ratios additionally carry the x-mode phase and the
/// table only records them.
FactorizationReport factorization_check(const StateVector& state,
                                        Complex index, FactorizationKind kind,
                                        int max_order);

void write_csv(const FactorizationReport& report, std::ostream& out);

}  // namespace hops

#endif  // HOPS_POLARIZATION_HPP
