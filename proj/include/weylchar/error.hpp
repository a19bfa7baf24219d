#pragma once

#include <stdexcept>
#include <string>

namespace weylchar {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: nonpositive hbar, bad sizes, out-of-range indices.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operands of incompatible dimension (group elements, matrices, grids).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numerical result left its tolerance band (negativity, drift, residues).
class ToleranceError : public Error {
 public:
  using Error::Error;
};

/// The Fock truncation cannot represent the requested state or operator.
class TruncationError : public ToleranceError {
 public:
  using ToleranceError::ToleranceError;
};

/// Grid data does not decay at the boundary, so quadrature is unreliable.
class DecayError : public ToleranceError {
 public:
  using ToleranceError::ToleranceError;
};

/// Time step or grid too coarse for the requested evolution.
class CflError : public ToleranceError {
 public:
  using ToleranceError::ToleranceError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace weylchar
