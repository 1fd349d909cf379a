#pragma once

#include <stdexcept>
#include <string>

namespace relpos {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in ambient spaces of different dimension, or a map has the
/// wrong shape for the spaces it is applied to.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An argument violates a documented precondition (arity, range, NaN, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A structural hypothesis of an operation does not hold for the input,
/// e.g. pentagon_split on a system with E1 ∩ E2 ≠ 0.
class PreconditionFailure : public Error {
 public:
  PreconditionFailure(std::string hypothesis, const std::string& what)
      : Error(what), hypothesis_(std::move(hypothesis)) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

/// Rank decisions were inconsistent with each other, so an identity that
/// holds in exact arithmetic failed numerically.
class ConditioningFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace relpos
