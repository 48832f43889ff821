#pragma once

#include <stdexcept>
#include <string>

namespace zolo {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a mathematical function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (unsorted points, overlapping intervals, bad files).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The chain max X > min X > max Y > min Y does not hold.
class SeparationError : public Error {
 public:
  using Error::Error;
};

/// X or Y collapses to a single point.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at (or numerically on top of) a pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A maximization slice of the equioscillation state is empty.
class EmptySliceError : public Error {
 public:
  using Error::Error;
};

/// A domain cannot host the requested number of points.
class CardinalityError : public Error {
 public:
  using Error::Error;
};

/// Two quantities that must differ became equal in floating point. This is
/// the numerical floor of the equioscillation iteration.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// No step length reduces the equioscillation spread.
class StagnationError : public Error {
 public:
  using Error::Error;
};

/// A partition or rank index outside its admissible range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Iteration cap reached.
class MaxIterError : public Error {
 public:
  using Error::Error;
};

}  // namespace zolo
