#include "hops/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

namespace hops {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kNormTol = 1e-10;
constexpr double kVarianceClamp = 1e-12;
constexpr double kCoherentTailLimit = 1e-12;
constexpr double kEvolveTailLimit = 1e-8;
constexpr int kDenseEvolveMaxDim = 1000;

void check_same_space(const FockSpace& a, const FockSpace& b,
                      const char* what) {
  if (!(a == b)) {
    throw PreconditionError(std::string(what) + ": operands live on different Fock spaces");
  }
}

}  // namespace

FockSpace::FockSpace(int n_max) : n_max_(n_max) {
  if (n_max < kMinCutoff || n_max > kMaxCutoff) {
    std::ostringstream msg;
    msg << "FockSpace cutoff n_max=" << n_max << " outside [" << kMinCutoff
        << ", " << kMaxCutoff << "]";
    throw PreconditionError(msg.str());
  }
}

FockSpace make_fock_space(int n_max) { return FockSpace(n_max); }

OperatorMatrix make_operator(const FockSpace& space, Eigen::MatrixXcd entries,
                             bool hermitian_hint) {
  if (entries.rows() != space.dim() || entries.cols() != space.dim()) {
    throw PreconditionError("make_operator: matrix shape does not match space");
  }
  if (hermitian_hint) {
    const double dev =
        (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (dev >= kHermitianTol) {
      std::ostringstream msg;
      msg << "make_operator: hermitian_hint set but max|M - M^dag| = " << dev;
      throw ConsistencyError(msg.str());
    }
  }
  return OperatorMatrix{space, std::move(entries), hermitian_hint};
}

OperatorMatrix identity_operator(const FockSpace& space) {
  return OperatorMatrix{space,
                        Eigen::MatrixXcd::Identity(space.dim(), space.dim()),
                        true};
}

OperatorMatrix mode_operator(const FockSpace& space, Mode mode,
                             LadderKind kind) {
  const int d = space.dim();
  const int m = space.per_mode_dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);

  if (kind == LadderKind::Number) {
    for (int i = 0; i < d; ++i) {
      const int n = (mode == Mode::X) ? space.n_x_of(i) : space.n_y_of(i);
      out(i, i) = static_cast<double>(n);
    }
    return OperatorMatrix{space, std::move(out), true};
  }

  // a|n> = sqrt(n)|n-1> in `mode`, identity in the other.
  for (int nx = 0; nx < m; ++nx) {
    for (int ny = 0; ny < m; ++ny) {
      const int col = space.index(nx, ny);
      if (mode == Mode::X && nx > 0) {
        out(space.index(nx - 1, ny), col) = std::sqrt(double(nx));
      } else if (mode == Mode::Y && ny > 0) {
        out(space.index(nx, ny - 1), col) = std::sqrt(double(ny));
      }
    }
  }
  if (kind == LadderKind::Create) {
    out = out.adjoint().eval();
  }
  return OperatorMatrix{space, std::move(out), false};
}

namespace {

/// Untruncated Poisson tail P(n > n_max) for intensity lambda = |alpha|^2,
/// via stable iterative pmf accumulation.
double poisson_tail_beyond(double lambda, int n_max) {
  if (lambda == 0.0) return 0.0;
  double pmf = std::exp(-lambda);
  double cdf = pmf;
  for (int n = 1; n <= n_max; ++n) {
    pmf *= lambda / n;
    cdf += pmf;
  }
  return std::max(0.0, 1.0 - cdf);
}

Eigen::VectorXcd coherent_mode_amplitudes(Complex alpha, int per_mode_dim) {
  Eigen::VectorXcd c(per_mode_dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < per_mode_dim; ++n) {
    c(n) = c(n - 1) * alpha / std::sqrt(double(n));
  }
  return c;
}

}  // namespace

StateVector coherent_state(const FockSpace& space, Complex alpha_x,
                           Complex alpha_y) {
  for (const auto& [alpha, label] :
       {std::pair{alpha_x, "alpha_x"}, std::pair{alpha_y, "alpha_y"}}) {
    const double tail = poisson_tail_beyond(std::norm(alpha), space.n_max());
    if (tail >= kCoherentTailLimit) {
      std::ostringstream msg;
      msg << "coherent_state: cutoff n_max=" << space.n_max()
          << " insufficient for " << label << " with |alpha|^2 = "
          << std::norm(alpha) << " (Poisson tail " << tail << ")";
      throw TruncationError(msg.str());
    }
  }
  const Eigen::VectorXcd cx = coherent_mode_amplitudes(alpha_x, space.per_mode_dim());
  const Eigen::VectorXcd cy = coherent_mode_amplitudes(alpha_y, space.per_mode_dim());
  Eigen::VectorXcd amps(space.dim());
  for (int nx = 0; nx < space.per_mode_dim(); ++nx) {
    for (int ny = 0; ny < space.per_mode_dim(); ++ny) {
      amps(space.index(nx, ny)) = cx(nx) * cy(ny);
    }
  }
  amps /= amps.norm();
  return StateVector{space, std::move(amps)};
}

Complex expectation(const StateVector& state, const OperatorMatrix& op) {
  check_same_space(state.space, op.space, "expectation");
  const Complex value = state.amplitudes.dot(op.entries * state.amplitudes);
  if (op.hermitian_hint && std::abs(value.imag()) >= kHermitianTol *
          std::max(1.0, std::abs(value.real()))) {
    std::ostringstream msg;
    msg << "expectation: hermitian operator produced imaginary part "
        << value.imag();
    throw ConsistencyError(msg.str());
  }
  return value;
}

double variance(const StateVector& state, const OperatorMatrix& op) {
  check_same_space(state.space, op.space, "variance");
  if (!op.hermitian_hint) {
    throw PreconditionError("variance: operator is not marked hermitian");
  }
  // <M^2> = ||M psi||^2 avoids forming the dense square.
  const Eigen::VectorXcd m_psi = op.entries * state.amplitudes;
  const double second = m_psi.squaredNorm();
  const double mean = state.amplitudes.dot(m_psi).real();
  double var = second - mean * mean;
  if (var < 0.0) {
    if (var < -kVarianceClamp * std::max(1.0, second)) {
      std::ostringstream msg;
      msg << "variance: negative value " << var << " beyond clamp window";
      throw ConsistencyError(msg.str());
    }
    var = 0.0;
  }
  return var;
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_same_space(a.space, b.space, "commutator");
  return OperatorMatrix{a.space, a.entries * b.entries - b.entries * a.entries,
                        false};
}

double tail_mass(const StateVector& state, int shells) {
  if (shells < 1) throw PreconditionError("tail_mass: shells must be >= 1");
  const int edge = state.space.n_max() - (shells - 1);
  double mass = 0.0;
  for (int i = 0; i < state.space.dim(); ++i) {
    if (state.space.n_x_of(i) >= edge || state.space.n_y_of(i) >= edge) {
      mass += std::norm(state.amplitudes(i));
    }
  }
  return mass;
}

OperatorMatrix project_interior(const OperatorMatrix& op, int margin) {
  if (margin < 1) throw PreconditionError("project_interior: margin must be >= 1");
  const int edge = op.space.n_max() - (margin - 1);
  Eigen::MatrixXcd entries = op.entries;
  for (int i = 0; i < op.space.dim(); ++i) {
    if (op.space.n_x_of(i) >= edge || op.space.n_y_of(i) >= edge) {
      entries.row(i).setZero();
      entries.col(i).setZero();
    }
  }
  return OperatorMatrix{op.space, std::move(entries), false};
}

double max_abs(const OperatorMatrix& op) {
  return op.entries.cwiseAbs().maxCoeff();
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_same_space(a.space, b.space, "operator+");
  return OperatorMatrix{a.space, a.entries + b.entries,
                        a.hermitian_hint && b.hermitian_hint};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_same_space(a.space, b.space, "operator-");
  return OperatorMatrix{a.space, a.entries - b.entries,
                        a.hermitian_hint && b.hermitian_hint};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_same_space(a.space, b.space, "operator*");
  return OperatorMatrix{a.space, a.entries * b.entries, false};
}

OperatorMatrix operator*(Complex scalar, const OperatorMatrix& a) {
  const bool keeps_hint = a.hermitian_hint && scalar.imag() == 0.0;
  return OperatorMatrix{a.space, scalar * a.entries, keeps_hint};
}

OperatorMatrix adjoint(const OperatorMatrix& a) {
  return OperatorMatrix{a.space, a.entries.adjoint(), a.hermitian_hint};
}

StateVector apply_annihilate(const StateVector& state, Mode mode) {
  const FockSpace& sp = state.space;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(sp.dim());
  const int m = sp.per_mode_dim();
  for (int nx = 0; nx < m; ++nx) {
    for (int ny = 0; ny < m; ++ny) {
      if (mode == Mode::X && nx + 1 < m) {
        out(sp.index(nx, ny)) =
            std::sqrt(double(nx + 1)) * state.amplitudes(sp.index(nx + 1, ny));
      } else if (mode == Mode::Y && ny + 1 < m) {
        out(sp.index(nx, ny)) =
            std::sqrt(double(ny + 1)) * state.amplitudes(sp.index(nx, ny + 1));
      }
    }
  }
  return StateVector{sp, std::move(out)};
}

StateVector apply_create(const StateVector& state, Mode mode) {
  const FockSpace& sp = state.space;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(sp.dim());
  const int m = sp.per_mode_dim();
  for (int nx = 0; nx < m; ++nx) {
    for (int ny = 0; ny < m; ++ny) {
      if (mode == Mode::X && nx > 0) {
        out(sp.index(nx, ny)) =
            std::sqrt(double(nx)) * state.amplitudes(sp.index(nx - 1, ny));
      } else if (mode == Mode::Y && ny > 0) {
        out(sp.index(nx, ny)) =
            std::sqrt(double(ny)) * state.amplitudes(sp.index(nx, ny - 1));
      }
    }
  }
  return StateVector{sp, std::move(out)};
}

namespace {

/// K = a_x a_y + a_x^dag a_y^dag applied matrix-free; K is real symmetric
/// in the number basis, coupling (n_x, n_y) <-> (n_x+1, n_y+1).
void apply_pair_coupling(const FockSpace& sp, const Eigen::VectorXcd& in,
                         Eigen::VectorXcd& out) {
  const int m = sp.per_mode_dim();
  out.setZero();
  for (int nx = 0; nx < m; ++nx) {
    for (int ny = 0; ny < m; ++ny) {
      const int i = sp.index(nx, ny);
      if (nx + 1 < m && ny + 1 < m) {
        out(i) += std::sqrt(double((nx + 1) * (ny + 1))) *
                  in(sp.index(nx + 1, ny + 1));
      }
      if (nx > 0 && ny > 0) {
        out(i) += std::sqrt(double(nx * ny)) * in(sp.index(nx - 1, ny - 1));
      }
    }
  }
}

Eigen::MatrixXd dense_pair_coupling(const FockSpace& sp) {
  const int m = sp.per_mode_dim();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(sp.dim(), sp.dim());
  for (int nx = 0; nx + 1 < m; ++nx) {
    for (int ny = 0; ny + 1 < m; ++ny) {
      const double w = std::sqrt(double((nx + 1) * (ny + 1)));
      k(sp.index(nx, ny), sp.index(nx + 1, ny + 1)) = w;
      k(sp.index(nx + 1, ny + 1), sp.index(nx, ny)) = w;
    }
  }
  return k;
}

/// One Lanczos step of exp(-i theta K) v for hermitian (here real
/// symmetric) K.  Returns the Krylov approximation and an error estimate.
Eigen::VectorXcd lanczos_expv(const FockSpace& sp, double theta,
                              const Eigen::VectorXcd& v, int krylov_dim,
                              double* err_estimate) {
  const int n = static_cast<int>(v.size());
  const int m = std::min(krylov_dim, n);
  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(m + 1);
  Eigen::VectorXd alpha(m), beta(m);

  const double v_norm = v.norm();
  basis.push_back(v / v_norm);
  Eigen::VectorXcd w(n);
  int steps = m;
  for (int j = 0; j < m; ++j) {
    apply_pair_coupling(sp, basis[j], w);
    alpha(j) = basis[j].dot(w).real();
    w -= alpha(j) * basis[j];
    if (j > 0) w -= beta(j - 1) * basis[j - 1];
    // One re-orthogonalization pass keeps the basis usable at these sizes.
    for (const auto& q : basis) w -= q.dot(w) * q;
    beta(j) = w.norm();
    if (beta(j) < 1e-14) {
      steps = j + 1;  // invariant subspace: Krylov result exact
      break;
    }
    if (j + 1 < m) basis.push_back(w / beta(j));
  }

  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(steps, steps);
  for (int j = 0; j < steps; ++j) {
    tri(j, j) = alpha(j);
    if (j + 1 < steps) tri(j, j + 1) = tri(j + 1, j) = beta(j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::MatrixXd& u = es.eigenvectors();
  Eigen::VectorXcd phase(steps);
  for (int j = 0; j < steps; ++j) {
    phase(j) = std::polar(1.0, -theta * lam(j));
  }
  // exp(-i theta T) e_1 in the Krylov basis.
  Eigen::VectorXcd small = u * (phase.asDiagonal() * u.row(0).transpose().cast<Complex>());

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (int j = 0; j < steps; ++j) out += small(j) * basis[j];
  out *= v_norm;

  *err_estimate = (steps < m || steps == n)
                      ? 0.0
                      : std::abs(beta(steps - 1) * small(steps - 1)) * std::abs(theta);
  return out;
}

}  // namespace

PairEvolver::PairEvolver(const FockSpace& space)
    : space_(space), dense_(space.dim() <= kDenseEvolveMaxDim) {
  if (dense_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_pair_coupling(space_));
    if (es.info() != Eigen::Success) {
      throw ConsistencyError("PairEvolver: eigendecomposition failed");
    }
    eigvecs_ = es.eigenvectors();
    eigvals_ = es.eigenvalues();
  }
}

StateVector PairEvolver::evolve(const StateVector& state, double g, double t,
                                Method method) const {
  check_same_space(state.space, space_, "PairEvolver::evolve");
  const double theta = g * t;
  if (std::abs(theta) > 2.0) {
    std::ostringstream msg;
    msg << "evolve: |g*t| = " << std::abs(theta) << " exceeds the supported 2.0";
    throw PreconditionError(msg.str());
  }
  if (theta == 0.0) return state;

  Method chosen = method;
  if (chosen == Method::Auto) {
    chosen = dense_ ? Method::DenseEigen : Method::Lanczos;
  }
  if (chosen == Method::DenseEigen && !dense_) {
    throw PreconditionError("evolve: dense path not built for dim > 1000");
  }

  Eigen::VectorXcd out;
  if (chosen == Method::DenseEigen) {
    Eigen::VectorXcd coeffs = eigvecs_.transpose() * state.amplitudes;
    for (int j = 0; j < coeffs.size(); ++j) {
      coeffs(j) *= std::polar(1.0, -theta * eigvals_(j));
    }
    out = eigvecs_ * coeffs;
  } else {
    // Substepped Lanczos; per-substep tolerance keeps the accumulated
    // norm drift well under the 1e-10 contract.
    const int krylov_dim = 40;
    const double substep_tol = 1e-13;
    out = state.amplitudes;
    double remaining = theta;
    double step = theta;
    int guard = 0;
    while (std::abs(remaining) > 0.0) {
      if (++guard > 10000) {
        throw ConsistencyError("evolve: Lanczos step control failed to converge");
      }
      if (std::abs(step) > std::abs(remaining)) step = remaining;
      double err = 0.0;
      Eigen::VectorXcd candidate = lanczos_expv(space_, step, out, krylov_dim, &err);
      if (err > substep_tol) {
        step *= 0.5;
        continue;
      }
      out.swap(candidate);
      remaining -= step;
      if (err < 0.01 * substep_tol) step *= 2.0;
    }
  }

  const double norm_drift = std::abs(out.norm() - 1.0);
  if (norm_drift >= kNormTol) {
    std::ostringstream msg;
    msg << "evolve: norm drift " << norm_drift << " exceeds 1e-10";
    throw ConsistencyError(msg.str());
  }

  StateVector evolved{space_, std::move(out)};
  const double edge_mass = tail_mass(evolved, 2);
  if (edge_mass >= kEvolveTailLimit) {
    std::ostringstream msg;
    msg << "evolve: truncation overflow, outermost two shells carry "
        << edge_mass << " probability (limit " << kEvolveTailLimit << ")";
    throw TruncationError(msg.str());
  }
  return evolved;
}

StateVector evolve_oracle(const StateVector& state, double g, double t) {
  return PairEvolver(state.space).evolve(state, g, t);
}

void dump_csv(const OperatorMatrix& op, std::ostream& out) {
  out << "row,col,real,imag\n";
  char buf[128];
  for (int r = 0; r < op.entries.rows(); ++r) {
    for (int c = 0; c < op.entries.cols(); ++c) {
      const Complex v = op.entries(r, c);
      if (v == Complex(0.0, 0.0)) continue;
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g\n", r, c, v.real(),
                    v.imag());
      out << buf;
    }
  }
}

void dump_csv(const StateVector& state, std::ostream& out) {
  out << "index,real,imag\n";
  char buf[96];
  for (int i = 0; i < state.amplitudes.size(); ++i) {
    const Complex v = state.amplitudes(i);
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", i, v.real(), v.imag());
    out << buf;
  }
}

}  // namespace hops
