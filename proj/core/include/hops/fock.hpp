#ifndef HOPS_FOCK_HPP
#define HOPS_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>

#include "hops/errors.hpp"

namespace hops {

using Complex = std::complex<double>;

/// Truncated two-mode bosonic Fock space with per-mode cutoff n_max
/// (inclusive).  Basis ordering is fixed and row-major in (n_x, n_y):
///
///   index(n_x, n_y) = n_x * (n_max + 1) + n_y,   0 <= n_x, n_y <= n_max
///
/// so dim = (n_max + 1)^2.  All CSV dumps and dense matrices follow this
/// ordering bit-for-bit.
class FockSpace {
 public:
  explicit FockSpace(int n_max);

  int n_max() const { return n_max_; }
  int per_mode_dim() const { return n_max_ + 1; }
  int dim() const { return (n_max_ + 1) * (n_max_ + 1); }

  int index(int n_x, int n_y) const { return n_x * (n_max_ + 1) + n_y; }
  int n_x_of(int idx) const { return idx / (n_max_ + 1); }
  int n_y_of(int idx) const { return idx % (n_max_ + 1); }

  friend bool operator==(const FockSpace&, const FockSpace&) = default;

 private:
  int n_max_;
};

/// Lowest and highest admissible per-mode cutoffs.
inline constexpr int kMinCutoff = 1;
inline constexpr int kMaxCutoff = 128;

FockSpace make_fock_space(int n_max);

enum class Mode { X, Y };
enum class LadderKind { Annihilate, Create, Number };

/// Dense operator on a FockSpace.  hermitian_hint marks operators that are
/// hermitian by construction; it is validated (max |M - M^dag| < 1e-12)
/// whenever it is set through make_operator.
struct OperatorMatrix {
  FockSpace space;
  Eigen::MatrixXcd entries;
  bool hermitian_hint = false;
};

OperatorMatrix make_operator(const FockSpace& space, Eigen::MatrixXcd entries,
                             bool hermitian_hint);

/// Pure state on a FockSpace; unit norm within 1e-10 after construction by
/// coherent_state and after evolve.
struct StateVector {
  FockSpace space;
  Eigen::VectorXcd amplitudes;
};

OperatorMatrix identity_operator(const FockSpace& space);

/// Single-mode ladder operator acting in `mode`, identity in the other
/// mode.  Annihilate: a|n> = sqrt(n)|n-1>.  Number = Create * Annihilate,
/// which is exactly diag(n) even at the cutoff.
OperatorMatrix mode_operator(const FockSpace& space, Mode mode,
                             LadderKind kind);

/// Truncated tensor-product coherent state |alpha_x, alpha_y>, normalized.
/// Requires the untruncated Poisson tail beyond n_max to be below 1e-12 in
/// each mode; throws TruncationError otherwise.
StateVector coherent_state(const FockSpace& space, Complex alpha_x,
                           Complex alpha_y);

/// <psi|M|psi>.  When hermitian_hint is set the imaginary part is checked
/// against 1e-12 and the value is returned as-is.
Complex expectation(const StateVector& state, const OperatorMatrix& op);

/// <M^2> - <M>^2 for hermitian M, clamped to zero in [-1e-12, 0); values
/// below -1e-12 raise ConsistencyError.
double variance(const StateVector& state, const OperatorMatrix& op);

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Total probability carried by basis states within `shells` of the cutoff
/// in either mode (shells = 1: n_x = n_max or n_y = n_max).
double tail_mass(const StateVector& state, int shells = 1);

/// Zeroes every row and column whose n_x or n_y lies within `margin` of the
/// cutoff.  Ladder truncation spoils operator identities only on that
/// boundary, so identities are asserted on the projected interior.
OperatorMatrix project_interior(const OperatorMatrix& op, int margin = 1);

double max_abs(const OperatorMatrix& op);

// Space-checked dense algebra used by the operator suites and tests.
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(Complex scalar, const OperatorMatrix& a);
OperatorMatrix adjoint(const OperatorMatrix& a);

// Matrix-free ladder application; exact on the truncated space.
StateVector apply_annihilate(const StateVector& state, Mode mode);
StateVector apply_create(const StateVector& state, Mode mode);

/// Evolves a state under the pair interaction H = g (a_x a_y + h.c.) in the
/// rotating frame for time t.  Uses an exact eigendecomposition of the
/// (real symmetric) interaction for dim <= 1000 and a matrix-free Lanczos
/// propagator with norm monitoring above that.  Construct once and reuse:
/// the decomposition is cached per space.
class PairEvolver {
 public:
  explicit PairEvolver(const FockSpace& space);

  enum class Method { Auto, DenseEigen, Lanczos };

  /// |g*t| <= 2; post-evolution population of the two outermost shells must
  /// stay below 1e-8 (TruncationError otherwise); norm is preserved to
  /// 1e-10 (ConsistencyError otherwise).
  StateVector evolve(const StateVector& state, double g, double t,
                     Method method = Method::Auto) const;

 private:
  FockSpace space_;
  bool dense_;
  Eigen::MatrixXd eigvecs_;   // dense path only
  Eigen::VectorXd eigvals_;   // dense path only
};

/// One-shot convenience wrapper around PairEvolver.
StateVector evolve_oracle(const StateVector& state, double g, double t);

/// Debug dumps: "row,col,real,imag" for operators, "index,real,imag" for
/// states, in the documented basis ordering.
void dump_csv(const OperatorMatrix& op, std::ostream& out);
void dump_csv(const StateVector& state, std::ostream& out);

}  // namespace hops

#endif  // HOPS_FOCK_HPP
