#include "hops/polarization.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace hops {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kProductTol = 1e-9;

OperatorQuad build_quad(const FockSpace& space, QuadFamily family,
                        double phi) {
  const OperatorMatrix ax = mode_operator(space, Mode::X, LadderKind::Annihilate);
  const OperatorMatrix ay = mode_operator(space, Mode::Y, LadderKind::Annihilate);
  const OperatorMatrix nx = mode_operator(space, Mode::X, LadderKind::Number);
  const OperatorMatrix ny = mode_operator(space, Mode::Y, LadderKind::Number);

  OperatorMatrix o0 = ny + nx;
  OperatorMatrix o1 = ny - nx;

  // o2 + i o3 = 2 B with B = a_y^dag a_x (Stokes) or e^{2i phi} a_y a_x
  // (hidden); split into hermitian parts B + B^dag and -i(B - B^dag).
  OperatorMatrix b = (family == QuadFamily::Stokes)
                         ? adjoint(ay) * ax
                         : std::polar(1.0, 2.0 * phi) * (ay * ax);
  OperatorMatrix o2 = b + adjoint(b);
  OperatorMatrix o3 = Complex(0.0, -1.0) * (b - adjoint(b));
  o2.hermitian_hint = true;
  o3.hermitian_hint = true;

  return OperatorQuad{family, phi, std::move(o0), std::move(o1), std::move(o2),
                      std::move(o3)};
}

}  // namespace

OperatorQuad stokes_operators(const FockSpace& space) {
  return build_quad(space, QuadFamily::Stokes, 0.0);
}

OperatorQuad hidden_operators(const FockSpace& space, double phi) {
  return build_quad(space, QuadFamily::Hidden, phi);
}

UncertaintyBounds uncertainty_bounds(const StateVector& state,
                                     const OperatorQuad& quad) {
  if (quad.family != QuadFamily::Hidden) {
    throw PreconditionError("uncertainty_bounds: hidden family required");
  }
  const double h0 = expectation(state, quad.o0).real();
  const double h2 = expectation(state, quad.o2).real();
  const double h3 = expectation(state, quad.o3).real();
  return UncertaintyBounds{std::abs(h3), std::abs(1.0 + h0), std::abs(h2)};
}

UncertaintyProductReport uncertainty_products_hold(const StateVector& state,
                                                   const OperatorQuad& quad) {
  if (quad.family != QuadFamily::Hidden) {
    throw PreconditionError("uncertainty_products_hold: hidden family required");
  }
  const UncertaintyBounds b = uncertainty_bounds(state, quad);
  const double v0 = variance(state, quad.o0);
  const double v2 = variance(state, quad.o2);
  const double v3 = variance(state, quad.o3);

  UncertaintyProductReport rep;
  rep.products = {v0 * v2, v2 * v3, v3 * v0};
  rep.bounds_sq = {b.b_02 * b.b_02, b.b_23 * b.b_23, b.b_30 * b.b_30};
  rep.hold = true;
  for (int i = 0; i < 3; ++i) {
    rep.margins[i] = rep.products[i] - rep.bounds_sq[i];
    if (rep.margins[i] < -kProductTol * std::max(1.0, rep.bounds_sq[i])) {
      rep.hold = false;
    }
  }
  return rep;
}

Complex iop_of(Complex alpha_x, Complex alpha_y) {
  if (alpha_x == Complex(0.0, 0.0)) {
    throw PreconditionError("iop_of: alpha_x must be nonzero");
  }
  return alpha_y / alpha_x;
}

Complex ihop_of(Complex alpha_x, Complex alpha_y) {
  if (alpha_x == Complex(0.0, 0.0)) {
    throw PreconditionError("ihop_of: alpha_x must be nonzero");
  }
  return alpha_y / std::conj(alpha_x);
}

PolarizationIndices polarization_indices(Complex alpha_x, Complex alpha_y) {
  PolarizationIndices idx;
  idx.iop = iop_of(alpha_x, alpha_y);
  idx.ihop = ihop_of(alpha_x, alpha_y);
  idx.iop_mag = std::abs(idx.iop);
  idx.ihop_mag = std::abs(idx.ihop);
  idx.iop_phase = std::arg(idx.iop);
  double delta = std::arg(idx.ihop);  // arg is already in (-pi, pi]
  if (delta == -std::numbers::pi) delta = std::numbers::pi;
  idx.delta_h = delta;
  idx.chi_h = 2.0 * std::atan(idx.ihop_mag);
  return idx;
}

BasisVector make_basis_vector(Complex ex, Complex ey) {
  const double norm2 = std::norm(ex) + std::norm(ey);
  if (std::abs(norm2 - 1.0) >= kUnitTol) {
    std::ostringstream msg;
    msg << "make_basis_vector: |ex|^2 + |ey|^2 = " << norm2 << " != 1";
    throw PreconditionError(msg.str());
  }
  return BasisVector{ex, ey};
}

std::pair<OperatorMatrix, OperatorMatrix> transform_basis(
    const FockSpace& space, const BasisVector& e) {
  make_basis_vector(e.ex, e.ey);  // revalidate
  const BasisVector ep = e.orthogonal();
  const OperatorMatrix ax = mode_operator(space, Mode::X, LadderKind::Annihilate);
  const OperatorMatrix ay = mode_operator(space, Mode::Y, LadderKind::Annihilate);
  OperatorMatrix a_e = std::conj(e.ex) * ax + std::conj(e.ey) * ay;
  OperatorMatrix a_perp = std::conj(ep.ex) * ax + std::conj(ep.ey) * ay;
  return {std::move(a_e), std::move(a_perp)};
}

Complex glauber_gamma(const StateVector& state, int m_x, int m_y, int n_x,
                      int n_y) {
  if (m_x < 0 || m_y < 0 || n_x < 0 || n_y < 0) {
    throw PreconditionError("glauber_gamma: negative exponent");
  }
  const int n_max = state.space.n_max();
  if (m_x + n_x > n_max || m_y + n_y > n_max) {
    std::ostringstream msg;
    msg << "glauber_gamma: exponents (" << m_x << "," << m_y << "," << n_x
        << "," << n_y << ") exceed ordering headroom at n_max=" << n_max;
    throw TruncationError(msg.str());
  }
  // <psi| ax^dag^mx ay^dag^my ax^nx ay^ny |psi> = <chi|ket> with
  // chi = ax^mx ay^my psi and ket = ax^nx ay^ny psi.
  StateVector ket = state;
  for (int i = 0; i < n_x; ++i) ket = apply_annihilate(ket, Mode::X);
  for (int i = 0; i < n_y; ++i) ket = apply_annihilate(ket, Mode::Y);
  StateVector bra = state;
  for (int i = 0; i < m_x; ++i) bra = apply_annihilate(bra, Mode::X);
  for (int i = 0; i < m_y; ++i) bra = apply_annihilate(bra, Mode::Y);
  return bra.amplitudes.dot(ket.amplitudes);
}

FactorizationReport factorization_check(const StateVector& state,
                                        Complex index, FactorizationKind kind,
                                        int max_order) {
  if (max_order < 1) {
    throw PreconditionError("factorization_check: max_order must be >= 1");
  }
  if (2 * max_order > state.space.n_max()) {
    std::ostringstream msg;
    msg << "factorization_check: max_order=" << max_order
        << " needs n_max >= " << 2 * max_order;
    throw TruncationError(msg.str());
  }

  FactorizationReport rep;
  rep.kind = kind;
  rep.index = index;
  rep.max_dev_derived = 0.0;
  rep.max_dev_alt = 0.0;

  auto ipow = [](Complex base, int n) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= base;
    return r;
  };

  for (int bigM = 0; bigM <= max_order; ++bigM) {
    for (int bigN = 0; bigN <= max_order; ++bigN) {
      if (bigM == 0 && bigN == 0) continue;
      const Complex base = glauber_gamma(state, bigM, 0, bigN, 0);
      for (int m_y = 0; m_y <= bigM; ++m_y) {
        for (int n_y = 0; n_y <= bigN; ++n_y) {
          const int m_x = bigM - m_y;
          const int n_x = bigN - n_y;
          FactorizationRow row;
          row.m_x = m_x;
          row.m_y = m_y;
          row.n_x = n_x;
          row.n_y = n_y;
          row.gamma = glauber_gamma(state, m_x, m_y, n_x, n_y);
          row.base_gamma = base;
          row.measured_ratio = (std::abs(base) > 0.0)
                                   ? row.gamma / base
                                   : Complex(0.0, 0.0);
          row.derived_ratio = ipow(std::conj(index), m_y) * ipow(index, n_y);
          const int alt_exp = (kind == FactorizationKind::Polarized) ? m_x : n_x;
          row.alt_ratio = ipow(std::conj(index), m_y) * ipow(index, alt_exp);
          row.dev_derived =
              std::abs(row.gamma - row.derived_ratio * row.base_gamma);
          row.dev_alt = std::abs(row.gamma - row.alt_ratio * row.base_gamma);
          rep.max_dev_derived = std::max(rep.max_dev_derived, row.dev_derived);
          rep.max_dev_alt = std::max(rep.max_dev_alt, row.dev_alt);
          rep.rows.push_back(row);
        }
      }
    }
  }
  return rep;
}

void write_csv(const FactorizationReport& report, std::ostream& out) {
  out << "m_x,m_y,n_x,n_y,gamma_re,gamma_im,base_re,base_im,"
         "measured_ratio_re,measured_ratio_im,derived_ratio_re,"
         "derived_ratio_im,alt_ratio_re,alt_ratio_im,dev_derived,dev_alt\n";
  char buf[512];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf),
                  "%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.m_x, r.m_y, r.n_x, r.n_y, r.gamma.real(), r.gamma.imag(),
                  r.base_gamma.real(), r.base_gamma.imag(),
                  r.measured_ratio.real(), r.measured_ratio.imag(),
                  r.derived_ratio.real(), r.derived_ratio.imag(),
                  r.alt_ratio.real(), r.alt_ratio.imag(), r.dev_derived,
                  r.dev_alt);
    out << buf;
  }
}

}  // namespace hops
