#include "rubeval/error.hpp"

namespace rubeval {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidScale: return "InvalidScale";
    case ErrorCode::InvalidCondition: return "InvalidCondition";
    case ErrorCode::InvalidComparison: return "InvalidComparison";
    case ErrorCode::OutOfRangeScore: return "OutOfRangeScore";
    case ErrorCode::CriterionConditionMismatch: return "CriterionConditionMismatch";
    case ErrorCode::DistributionMismatch: return "DistributionMismatch";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::DuplicateScore: return "DuplicateScore";
    case ErrorCode::NonFiniteProbability: return "NonFiniteProbability";
    case ErrorCode::NoValidScoreToken: return "NoValidScoreToken";
    case ErrorCode::CriterionSetMismatch: return "CriterionSetMismatch";
    case ErrorCode::EmptyAnswerList: return "EmptyAnswerList";
    case ErrorCode::AnswerOutOfRange: return "AnswerOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MissingDesignatedRater: return "MissingDesignatedRater";
    case ErrorCode::EvenVoterCount: return "EvenVoterCount";
    case ErrorCode::NonBinaryMajorityInput: return "NonBinaryMajorityInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateVariable: return "DegenerateVariable";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::TooFewItems: return "TooFewItems";
    case ErrorCode::AllResamplesDegenerate: return "AllResamplesDegenerate";
    case ErrorCode::InconsistentRaterCount: return "InconsistentRaterCount";
    case ErrorCode::UnsupportedRaterCount: return "UnsupportedRaterCount";
    case ErrorCode::NoDominatingExample: return "NoDominatingExample";
    case ErrorCode::InsufficientPool: return "InsufficientPool";
    case ErrorCode::MissingExamples: return "MissingExamples";
    case ErrorCode::MissingContextBlock: return "MissingContextBlock";
    case ErrorCode::ConditionBundleMismatch: return "ConditionBundleMismatch";
    case ErrorCode::ReplayMiss: return "ReplayMiss";
    case ErrorCode::ProviderFailure: return "ProviderFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateRecord: return "DuplicateRecord";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::MissingComparison: return "MissingComparison";
    case ErrorCode::InvalidMarkerSet: return "InvalidMarkerSet";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::MissingCondition: return "MissingCondition";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::MissingCondition:
    case ErrorCode::InvalidComparison:
    case ErrorCode::InvalidScale:
      return true;
    default:
      return false;
  }
}

}  // namespace rubeval
