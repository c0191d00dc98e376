#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace isocm {

enum class ErrorKind {
  DegenerateSpectrum,
  ConstraintViolation,
  PhaseFixFailure,
  DimensionMismatch,
  ChamberBoundary,
  StepSizeUnderflow,
  UnbalancedWord,
  RankUnstable,
  EvaluationFailure,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A reduced trajectory reached the boundary of the regular (Weyl chamber) region.
class ChamberBoundaryError : public Error {
 public:
  ChamberBoundaryError(double exit_time, const std::string& what);
  double exit_time() const noexcept { return exit_time_; }

 private:
  double exit_time_;
};

}  // namespace isocm
