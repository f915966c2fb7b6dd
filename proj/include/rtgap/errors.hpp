#pragma once

#include <stdexcept>
#include <string>

namespace rtgap {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedDescriptor : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct IndexOutOfRange : Error {
  using Error::Error;
};

/// Raised when a breadth-first Weyl group closure grows past its cap.
struct CapExceeded : Error {
  using Error::Error;
};

/// Raised by the uniform-gap certificate for groups without a finite p_K.
struct NoQuantitativeGap : Error {
  using Error::Error;
};

struct QuadratureNotConverged : Error {
  using Error::Error;
};

struct SingularMatrix : Error {
  using Error::Error;
};

struct IndicatorUnbounded : Error {
  using Error::Error;
};

struct PreconditionViolated : Error {
  using Error::Error;
};

}  // namespace rtgap
