#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rubeval {

enum class ErrorCode {
  // core model
  InvalidScale,
  InvalidCondition,
  InvalidComparison,
  OutOfRangeScore,
  CriterionConditionMismatch,
  DistributionMismatch,
  // scoring
  EmptyDistribution,
  DuplicateScore,
  NonFiniteProbability,
  NoValidScoreToken,
  // aggregation
  CriterionSetMismatch,
  EmptyAnswerList,
  AnswerOutOfRange,
  InvalidArgument,
  EmptyInput,
  MissingDesignatedRater,
  EvenVoterCount,
  NonBinaryMajorityInput,
  // concordance
  LengthMismatch,
  DegenerateVariable,
  NonFiniteValue,
  // inference
  TooFewItems,
  AllResamplesDegenerate,
  // stratify
  InconsistentRaterCount,
  UnsupportedRaterCount,
  // promptkit
  NoDominatingExample,
  InsufficientPool,
  MissingExamples,
  MissingContextBlock,
  ConditionBundleMismatch,
  ReplayMiss,
  ProviderFailure,
  // pipeline
  ParseError,
  DuplicateRecord,
  SchemaVersionMismatch,
  MissingComparison,
  InvalidMarkerSet,
  ConfigError,
  MissingCondition,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// True for errors caused by the experiment configuration rather than by the data.
bool is_config_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace rubeval
