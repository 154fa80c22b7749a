#include "drsub/error.hpp"

namespace drsub {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotAForest: return "NotAForest";
    case ErrorCode::NonMonotoneBounds: return "NonMonotoneBounds";
    case ErrorCode::NonPositiveBound: return "NonPositiveBound";
    case ErrorCode::Assumption1Violated: return "Assumption1Violated";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::InfeasibleInput: return "InfeasibleInput";
    case ErrorCode::NotAPermutation: return "NotAPermutation";
    case ErrorCode::InvalidPartial: return "InvalidPartial";
    case ErrorCode::InvalidPrefix: return "InvalidPrefix";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::NotInHull: return "NotInHull";
    case ErrorCode::NotAPsiRoot: return "NotAPsiRoot";
    case ErrorCode::DecompositionResidual: return "DecompositionResidual";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::NonDRSubmodularDetected: return "NonDRSubmodularDetected";
    case ErrorCode::OracleEvaluationFailure: return "OracleEvaluationFailure";
  }
  return "Unknown";
}

}  // namespace drsub
