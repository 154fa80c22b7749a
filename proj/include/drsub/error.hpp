#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace drsub {

enum class ErrorCode {
  InvalidArgument,
  NotAForest,
  NonMonotoneBounds,
  NonPositiveBound,
  Assumption1Violated,
  AssumptionViolated,
  InfeasibleInput,
  NotAPermutation,
  InvalidPartial,
  InvalidPrefix,
  InvalidPermutation,
  NotInHull,
  NotAPsiRoot,
  DecompositionResidual,
  TooLarge,
  BudgetExceeded,
  NumericalFailure,
  IterationLimit,
  NonDRSubmodularDetected,
  OracleEvaluationFailure,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace drsub
