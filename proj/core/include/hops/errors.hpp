#ifndef HOPS_ERRORS_HPP
#define HOPS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hops {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad cutoff, wrong family,
/// mismatched spaces, out-of-range parameter, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The requested computation cannot be represented at the current
/// photon-number cutoff: a coherent amplitude whose Poisson tail leaks past
/// n_max, or an evolution that populated the outermost number shells.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// An internal numerical sanity check failed (norm drift, a variance far
/// below zero, a hermitian-tagged matrix that is not hermitian).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Distinguished signal for the Moebius pole of the evolved hidden
/// polarization index: the evolved x-amplitude mean vanishes and the index
/// is undefined on that parameter surface.
class MobiusPoleError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration, fixture or command-line input.  The CLI maps
/// this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hops

#endif  // HOPS_ERRORS_HPP
