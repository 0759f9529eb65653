#pragma once

#include <stdexcept>
#include <string>

namespace mmgrad {

enum class ErrorCode {
  InvalidArgument = 1,
  Parse,
  TriangleViolation,
  AsymmetricDistance,
  DuplicatePoint,
  DisconnectedGraph,
  NonpositiveEdgeLength,
  EdgeLongerThanMetric,
  UnknownPoint,
  ParameterRange,
  HopLimitTooLarge,
  NotAHajlaszGradient,
  DegenerateGradient,
  EmptySet,
  PatchDisagreementOnPositiveMeasure,
  UpperGradientFailure,
  ResolutionTooFine,
  SolverFailure,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mmgrad
