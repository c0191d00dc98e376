#include "isocm/errors.hpp"

namespace isocm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::PhaseFixFailure: return "PhaseFixFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ChamberBoundary: return "ChamberBoundary";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::UnbalancedWord: return "UnbalancedWord";
    case ErrorKind::RankUnstable: return "RankUnstable";
    case ErrorKind::EvaluationFailure: return "EvaluationFailure";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

ChamberBoundaryError::ChamberBoundaryError(double exit_time, const std::string& what)
    : Error(ErrorKind::ChamberBoundary, what), exit_time_(exit_time) {}

}  // namespace isocm
