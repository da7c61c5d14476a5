#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace scs {

template <typename Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (bad lengths, empty sets, out-of-range indices).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The two decimation factors share a common divisor.
class NotCoprime : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A formula was evaluated outside of its domain.
class DomainError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The restricted measurement matrix is (numerically) rank deficient, or the
/// requested support is too large to be solved with the available sequences.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace scs
