// SPDX-License-Identifier: Apache-2.0

#include "mepsolve/errors.hpp"

namespace mep {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::EigenFailure: return "EigenFailure";
    case ErrorKind::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorKind::DefectiveEigenvalue: return "DefectiveEigenvalue";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::StallDetected: return "StallDetected";
    case ErrorKind::SizeGuard: return "SizeGuard";
    case ErrorKind::NonCommuting: return "NonCommuting";
    case ErrorKind::SingularDelta: return "SingularDelta";
    case ErrorKind::SingularTransform: return "SingularTransform";
  }
  return "Unknown";
}

MepError::MepError(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind), detail_(what) {}

SolveFailure::SolveFailure(ErrorKind kind, int iteration, const std::string& what)
    : MepError(kind, "iteration " + std::to_string(iteration) + ": " + what),
      iteration_(iteration) {}

}  // namespace mep
