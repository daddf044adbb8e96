#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hops/dynamics.hpp"
#include "hops/fock.hpp"
#include "hops/polarization.hpp"

using namespace hops;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

StateVector fock_state(const FockSpace& space, int nx, int ny) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space.dim());
  amps(space.index(nx, ny)) = 1.0;
  return StateVector{space, amps};
}

}  // namespace

TEST_CASE("stokes operators on vacuum and coherent states") {
  const FockSpace sp = make_fock_space(24);
  const OperatorQuad s = stokes_operators(sp);
  const StateVector vac = coherent_state(sp, 0.0, 0.0);
  for (const OperatorMatrix* op : {&s.o0, &s.o1, &s.o2, &s.o3}) {
    CHECK(std::abs(expectation(vac, *op)) < 1e-14);
  }

  const StateVector diag = coherent_state(sp, 1.0, 1.0);
  CHECK(expectation(diag, s.o2).real() == Approx(2.0).epsilon(1e-10));
  CHECK(expectation(diag, s.o3).real() == Approx(0.0).scale(1.0).epsilon(1e-10));

  // S3 = 2 Im <a_y^dag a_x>: alpha_y = i gives -2.
  const StateVector circ = coherent_state(sp, 1.0, Complex(0.0, 1.0));
  CHECK(expectation(circ, s.o3).real() == Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("stokes su(2) algebra on the interior") {
  const FockSpace sp = make_fock_space(8);
  const OperatorQuad s = stokes_operators(sp);
  const Complex two_i{0.0, 2.0};
  CHECK(max_abs(commutator(s.o0, s.o1)) == 0.0);
  CHECK(max_abs(commutator(s.o0, s.o2)) == 0.0);
  CHECK(max_abs(commutator(s.o0, s.o3)) == 0.0);
  CHECK(max_abs(project_interior(commutator(s.o1, s.o2) - two_i * s.o3)) < 1e-12);
  CHECK(max_abs(project_interior(commutator(s.o2, s.o3) - two_i * s.o1)) < 1e-12);
  CHECK(max_abs(project_interior(commutator(s.o3, s.o1) - two_i * s.o2)) < 1e-12);
}

TEST_CASE("hidden operators: expectations and the quad identity") {
  const FockSpace sp = make_fock_space(24);
  const OperatorQuad h = hidden_operators(sp, 0.0);

  const StateVector diag = coherent_state(sp, 1.0, 1.0);
  CHECK(expectation(diag, h.o2).real() == Approx(2.0).epsilon(1e-10));
  CHECK(expectation(diag, h.o3).real() == Approx(0.0).scale(1.0).epsilon(1e-10));

  const StateVector vac = coherent_state(sp, 0.0, 0.0);
  CHECK(std::abs(expectation(vac, h.o2)) < 1e-14);
  CHECK(variance(vac, h.o2) == Approx(1.0).epsilon(1e-12));

  const FockSpace small = make_fock_space(8);
  const OperatorQuad hs = hidden_operators(small, 0.0);
  const OperatorMatrix one = identity_operator(small);
  const OperatorMatrix dev = project_interior(
      hs.o1 * hs.o1 + hs.o2 * hs.o2 + hs.o3 * hs.o3 - hs.o0 * hs.o0 -
      Complex(2.0, 0.0) * (one + hs.o0));
  CHECK(max_abs(dev) < 1e-12);
}

TEST_CASE("hidden commutators carry the measured signs") {
  const FockSpace sp = make_fock_space(8);
  const OperatorQuad h = hidden_operators(sp, 0.0);
  const OperatorMatrix one = identity_operator(sp);
  const Complex two_i{0.0, 2.0};

  CHECK(max_abs(commutator(h.o1, h.o0)) == 0.0);
  CHECK(max_abs(commutator(h.o1, h.o2)) == 0.0);
  CHECK(max_abs(commutator(h.o1, h.o3)) == 0.0);

  // Measured: [H0, H2] = -2i H3 (the +2i H3 sign does not match).
  CHECK(max_abs(project_interior(commutator(h.o0, h.o2) + two_i * h.o3)) < 1e-12);
  CHECK(max_abs(project_interior(commutator(h.o0, h.o2) - two_i * h.o3)) > 1.0);
  // Measured: [H0, H3] = +2i H2.
  CHECK(max_abs(project_interior(commutator(h.o0, h.o3) - two_i * h.o2)) < 1e-12);
  CHECK(max_abs(project_interior(commutator(h.o2, h.o3) - two_i * (one + h.o0))) < 1e-12);
}

TEST_CASE("hidden operators are 2phi-periodic in the phase") {
  const FockSpace sp = make_fock_space(6);
  const OperatorQuad a = hidden_operators(sp, 0.7);
  const OperatorQuad b = hidden_operators(sp, 0.7 + kPi);
  CHECK(max_abs(a.o2 - b.o2) < 1e-12);
  CHECK(max_abs(a.o3 - b.o3) < 1e-12);
}

TEST_CASE("uncertainty bounds") {
  const FockSpace sp = make_fock_space(24);
  const OperatorQuad h = hidden_operators(sp, 0.0);
  const OperatorQuad s = stokes_operators(sp);

  const StateVector vac = coherent_state(sp, 0.0, 0.0);
  CHECK(uncertainty_bounds(vac, h).b_23 == Approx(1.0).epsilon(1e-12));

  const StateVector diag = coherent_state(sp, 1.0, 1.0);
  const UncertaintyBounds b = uncertainty_bounds(diag, h);
  CHECK(b.b_23 == Approx(3.0).epsilon(1e-9));
  CHECK(b.b_30 == Approx(2.0).epsilon(1e-9));

  CHECK_THROWS_AS(uncertainty_bounds(vac, s), PreconditionError);
}

TEST_CASE("uncertainty products hold for coherent and evolved states") {
  const FockSpace sp = make_fock_space(24);
  const OperatorQuad h = hidden_operators(sp, 0.0);
  const PairEvolver evolver(sp);

  // Vacuum saturates var(H2) var(H3) = |<1+H0>|^2 = 1.
  const StateVector vac = coherent_state(sp, 0.0, 0.0);
  const auto vac_rep = uncertainty_products_hold(vac, h);
  CHECK(vac_rep.hold);
  CHECK(vac_rep.products[1] == Approx(1.0).epsilon(1e-10));

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> mag(0.0, 0.9), phase(-3.1, 3.1);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex ax = std::polar(mag(rng), phase(rng));
    const Complex ay = std::polar(mag(rng), phase(rng));
    const StateVector psi = coherent_state(sp, ax, ay);
    CHECK(uncertainty_products_hold(psi, h).hold);
    const StateVector evolved = evolver.evolve(psi, 2.0, 0.2);
    CHECK(uncertainty_products_hold(evolved, h).hold);
  }
}

TEST_CASE("iop and ihop of amplitude pairs") {
  CHECK(iop_of(1.0, 1.0) == Complex(1.0, 0.0));
  CHECK(iop_of(1.0, Complex(0.0, 1.0)) == Complex(0.0, 1.0));
  CHECK(iop_of(2.0, Complex(1.0, 1.0)) == Complex(0.5, 0.5));
  CHECK_THROWS_AS(iop_of(0.0, 1.0), PreconditionError);

  CHECK(ihop_of(1.0, 1.0) == Complex(1.0, 0.0));
  // (i, 1): p_h = 1 / conj(i) = 1 / (-i) = i.
  CHECK(std::abs(ihop_of(Complex(0.0, 1.0), 1.0) - Complex(0.0, 1.0)) < 1e-15);
  // (1+i, 2): 2 / (1-i) = 1+i.
  CHECK(std::abs(ihop_of(Complex(1.0, 1.0), 2.0) - Complex(1.0, 1.0)) < 1e-15);
  CHECK_THROWS_AS(ihop_of(0.0, 1.0), PreconditionError);

  const PolarizationIndices idx = polarization_indices(Complex(0.0, 1.0), 1.0);
  CHECK(idx.delta_h == Approx(kPi / 2).epsilon(1e-15));
  CHECK(idx.ihop_mag == Approx(1.0));
  CHECK(idx.chi_h == Approx(2.0 * std::atan(1.0)).epsilon(1e-15));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mag(0.1, 2.0), phase(-3.1, 3.1);
  for (int trial = 0; trial < 30; ++trial) {
    const Complex ax = std::polar(mag(rng), phase(rng));
    const Complex ay = std::polar(mag(rng), phase(rng));
    const PolarizationIndices p = polarization_indices(ax, ay);
    CHECK(p.delta_h > -kPi);
    CHECK(p.delta_h <= kPi);
    CHECK(p.delta_h == Approx(std::remainder(std::arg(ax) + std::arg(ay),
                                             2.0 * kPi)).epsilon(1e-12));
  }
}

TEST_CASE("basis transform reproduces the rotated mode operators") {
  const FockSpace sp = make_fock_space(16);

  const BasisVector x_hat = make_basis_vector(1.0, 0.0);
  const auto [a_e, a_perp] = transform_basis(sp, x_hat);
  CHECK(max_abs(a_e - mode_operator(sp, Mode::X, LadderKind::Annihilate)) == 0.0);
  CHECK(max_abs(a_perp - mode_operator(sp, Mode::Y, LadderKind::Annihilate)) == 0.0);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const BasisVector diag = make_basis_vector(inv_sqrt2, inv_sqrt2);
  const auto [a_d, a_d_perp] = transform_basis(sp, diag);
  const StateVector psi = coherent_state(sp, 1.0, 1.0);
  CHECK(std::abs(expectation(psi, a_d) - Complex(std::sqrt(2.0), 0.0)) < 1e-10);

  CHECK(max_abs(project_interior(commutator(a_d, adjoint(a_d)) -
                                 identity_operator(sp))) < 1e-12);
  CHECK(max_abs(project_interior(commutator(a_d_perp, adjoint(a_d)))) < 1e-12);

  CHECK_THROWS_AS(make_basis_vector(1.0, 1.0), PreconditionError);
}

TEST_CASE("glauber correlations factorize on coherent states") {
  const FockSpace sp = make_fock_space(16);

  const StateVector vac = coherent_state(sp, 0.0, 0.0);
  CHECK(std::abs(glauber_gamma(vac, 1, 0, 1, 0)) == 0.0);
  CHECK(std::abs(glauber_gamma(vac, 2, 1, 0, 3)) == 0.0);

  CHECK(glauber_gamma(fock_state(sp, 1, 0), 1, 0, 1, 0).real() == Approx(1.0));

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> mag(0.2, 1.2), phase(-3.1, 3.1);
  for (int trial = 0; trial < 6; ++trial) {
    const Complex ax = std::polar(mag(rng), phase(rng));
    const Complex ay = std::polar(mag(rng), phase(rng));
    const StateVector psi = coherent_state(sp, ax, ay);
    for (int mx = 0; mx <= 2; ++mx)
      for (int my = 0; my <= 2; ++my)
        for (int nx = 0; nx <= 2; ++nx)
          for (int ny = 0; ny <= 2; ++ny) {
            const Complex expected = std::pow(std::conj(ax), mx) *
                                     std::pow(std::conj(ay), my) *
                                     std::pow(ax, nx) * std::pow(ay, ny);
            CHECK(std::abs(glauber_gamma(psi, mx, my, nx, ny) - expected) < 1e-9);
          }
  }

  CHECK_THROWS_AS(glauber_gamma(vac, 9, 0, 8, 0), TruncationError);
}

TEST_CASE("glauber sum rule matches the total photon number") {
  const FockSpace sp = make_fock_space(20);
  const OperatorQuad h = hidden_operators(sp, 0.0);
  const PairEvolver evolver(sp);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mag(0.0, 1.1), phase(-3.1, 3.1);
  for (int trial = 0; trial < 8; ++trial) {
    const StateVector psi = coherent_state(
        sp, std::polar(mag(rng), phase(rng)), std::polar(mag(rng), phase(rng)));
    const StateVector evolved = evolver.evolve(psi, 2.0, 0.2);
    for (const StateVector* state : {&psi, &evolved}) {
      const Complex sum = glauber_gamma(*state, 1, 0, 1, 0) +
                          glauber_gamma(*state, 0, 1, 0, 1);
      CHECK(std::abs(sum - expectation(*state, h.o0)) < 1e-10);
    }
  }
}

TEST_CASE("factorization check: polarized inputs follow the derived convention") {
  const FockSpace sp = make_fock_space(14);
  const Complex p{0.6, -0.3};
  const Complex ax{0.8, 0.4};
  const StateVector psi = coherent_state(sp, ax, p * ax);

  const FactorizationReport rep =
      factorization_check(psi, p, FactorizationKind::Polarized, 3);
  CHECK(rep.max_dev_derived < 1e-9);
  // The conj(p)^m_y p^m_x convention disagrees with measurement.
  CHECK(rep.max_dev_alt > 1e-3);

  // p = 0: every mixed-index correlation vanishes.
  const StateVector mono = coherent_state(sp, ax, 0.0);
  const FactorizationReport rep0 =
      factorization_check(mono, 0.0, FactorizationKind::Polarized, 3);
  for (const auto& row : rep0.rows) {
    if (row.m_y > 0 || row.n_y > 0) CHECK(std::abs(row.gamma) < 1e-12);
  }
}

TEST_CASE("factorization check: hops inputs tabulate phase-carrying ratios") {
  const FockSpace sp = make_fock_space(14);
  const Complex ph{0.5, 0.35};

  // Real alpha_x: measured ratios reduce to conj(p_h)^m_y p_h^n_y.
  const Complex ax_real{0.9, 0.0};
  const StateVector psi =
      coherent_state(sp, ax_real, ph * std::conj(ax_real));
  const FactorizationReport rep =
      factorization_check(psi, ph, FactorizationKind::Hops, 3);
  CHECK(rep.max_dev_derived < 1e-9);
  // The conj(p)^m_y p^n_x convention fails where n_x != n_y.
  CHECK(rep.max_dev_alt > 1e-3);

  // Complex alpha_x: the measured ratio picks up the x-mode phase
  // e^{2 i arg(alpha_x) (m_y - n_y)}.
  const Complex ax_cplx = std::polar(0.9, 0.6);
  const StateVector psi2 =
      coherent_state(sp, ax_cplx, ph * std::conj(ax_cplx));
  const FactorizationReport rep2 =
      factorization_check(psi2, ph, FactorizationKind::Hops, 2);
  for (const auto& row : rep2.rows) {
    if (std::abs(row.base_gamma) < 1e-12) continue;
    const Complex phase =
        std::polar(1.0, 2.0 * std::arg(ax_cplx) * (row.m_y - row.n_y));
    CHECK(std::abs(row.measured_ratio - row.derived_ratio * phase) < 1e-9);
  }

  CHECK_THROWS_AS(factorization_check(psi, ph, FactorizationKind::Hops, 8),
                  TruncationError);
}

TEST_CASE("factorization report renders its csv table") {
  const FockSpace sp = make_fock_space(14);
  const Complex p{0.5, 0.0};
  const StateVector psi = coherent_state(sp, 0.8, p * 0.8);
  const FactorizationReport rep =
      factorization_check(psi, p, FactorizationKind::Polarized, 2);
  std::ostringstream csv;
  write_csv(rep, csv);
  const std::string table = csv.str();
  CHECK(table.rfind("m_x,m_y,n_x,n_y,", 0) == 0);
  // One line per tuple plus the header.
  const auto lines = std::count(table.begin(), table.end(), '\n');
  CHECK(lines == static_cast<long>(rep.rows.size()) + 1);
}
