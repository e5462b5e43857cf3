#pragma once

// Shared vocabulary: score scales, rubric conditions, rating records and
// the rater/rubric comparison kinds.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rubeval {

enum class ScaleKind { IntegerScale, BinaryYesNo };

struct ScoreScale {
  int min_score = 0;
  int max_score = 1;
  ScaleKind kind = ScaleKind::IntegerScale;

  static ScoreScale integer(int min_score, int max_score);
  static ScoreScale binary();

  bool contains(double value) const { return value >= min_score && value <= max_score; }

  friend bool operator==(const ScoreScale&, const ScoreScale&) = default;
};

/// Throws InvalidScale when min >= max or a binary scale is not {0, 1}.
void validate_scale(const ScoreScale& scale);

enum class Domain { AES, IF };

enum class Decomposition { Holistic, Analytic };
enum class ExampleRegime { Full, ThreeEx, ZeroEx };
enum class CallStrategy { NotApplicable, Separate, Batch };

struct RubricCondition {
  Decomposition decomposition = Decomposition::Holistic;
  ExampleRegime examples = ExampleRegime::Full;
  CallStrategy call_strategy = CallStrategy::NotApplicable;
  bool edited = false;

  static RubricCondition holistic(ExampleRegime examples);
  static RubricCondition analytic(CallStrategy strategy, ExampleRegime examples);
  static RubricCondition edited_analytic();

  friend bool operator==(const RubricCondition&, const RubricCondition&) = default;
  friend auto operator<=>(const RubricCondition&, const RubricCondition&) = default;
};

/// Throws InvalidCondition when the holistic/edited invariants are violated.
void validate_condition(const RubricCondition& condition);

/// Compact form: "holistic/full", "holistic/3ex", "analytic/separate/0ex",
/// "analytic/separate/3ex/edited".
std::string format_condition(const RubricCondition& condition);
RubricCondition parse_condition(std::string_view text);

enum class RaterKind { Human, Autorater };

using Criterion = std::string;
inline constexpr std::string_view kOverall = "OVERALL";

/// Log-probability mass over candidate scores at the answer position.
struct ScoreDistribution {
  std::vector<std::pair<int, double>> entries;

  friend bool operator==(const ScoreDistribution&, const ScoreDistribution&) = default;
};

struct RatingRecord {
  std::string item_id;
  std::string rater_id;
  RaterKind rater_kind = RaterKind::Human;
  RubricCondition condition;
  Criterion criterion;
  double value = 0.0;
  std::optional<ScoreDistribution> distribution;

  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

/// The four score families: human/autorater crossed with holistic/analytic.
enum class ScoreFamily { HumanHolistic, HumanAnalytic, AutoraterHolistic, AutoraterAnalytic };

ScoreFamily family_of(RaterKind rater, Decomposition decomposition);
inline ScoreFamily family_of(const RatingRecord& record) {
  return family_of(record.rater_kind, record.condition.decomposition);
}

/// Returns the record unchanged when every record invariant holds for `scale`.
const RatingRecord& validate_record(const RatingRecord& record, const ScoreScale& scale);

struct RaterRubricSide {
  RaterKind rater_kind = RaterKind::Human;
  Decomposition decomposition = Decomposition::Holistic;

  friend bool operator==(const RaterRubricSide&, const RaterRubricSide&) = default;
};

enum class ComparisonVariant { DeltaRater, DeltaRubric, DeltaRaterRubric };

struct ComparisonKind {
  ComparisonVariant variant = ComparisonVariant::DeltaRater;
  RaterRubricSide side_a;
  RaterRubricSide side_b;
};

/// Derives the variant from the sides. Throws InvalidComparison when both
/// sides are identical.
ComparisonKind classify_comparison(RaterRubricSide a, RaterRubricSide b);

/// Throws InvalidComparison when `kind.variant` disagrees with its sides.
void validate_comparison(const ComparisonKind& kind);

std::string_view to_string(Domain domain);
std::string_view to_string(RaterKind kind);
std::string_view to_string(Decomposition decomposition);
std::string_view to_string(ComparisonVariant variant);
std::string_view to_string(ScoreFamily family);

Domain parse_domain(std::string_view text);
RaterKind parse_rater_kind(std::string_view text);
Decomposition parse_decomposition(std::string_view text);
ExampleRegime parse_example_regime(std::string_view text);
CallStrategy parse_call_strategy(std::string_view text);
ComparisonVariant parse_comparison_variant(std::string_view text);
std::string_view to_string(ExampleRegime examples);
std::string_view to_string(CallStrategy strategy);

}  // namespace rubeval
