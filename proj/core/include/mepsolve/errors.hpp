// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mep {

/// Failure categories surfaced by the library. The names returned by
/// error_name() are stable and printed verbatim by the CLI.
enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  MalformedFile,
  NotHermitian,
  EigenFailure,
  ComplexSpectrum,
  DefectiveEigenvalue,
  SingularJacobian,
  RankDeficient,
  StallDetected,
  SizeGuard,
  NonCommuting,
  SingularDelta,
  SingularTransform,
};

std::string_view error_name(ErrorKind kind) noexcept;

class MepError : public std::runtime_error {
 public:
  MepError(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }
  /// The message without the leading error name.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

/// A breakdown inside a Newton solve, tagged with the outer iteration
/// (1-based) at which it happened.
class SolveFailure : public MepError {
 public:
  SolveFailure(ErrorKind kind, int iteration, const std::string& what);

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace mep
