#pragma once

// Rubric-condition prompt assembly and representative example selection.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rubeval/aggregation.hpp"
#include "rubeval/model.hpp"

namespace rubeval {

struct Example {
  std::string text;
  CriterionScores scores;
  std::optional<std::string> explanation;
};

/// Rubric material for one domain/prompt. A holistic bundle carries exactly
/// one rubric text keyed OVERALL; an analytic bundle carries one text per
/// entry of `criterion_order`.
struct RubricBundle {
  Domain domain = Domain::AES;
  ScoreScale scale;
  std::optional<std::string> context_block;
  std::map<Criterion, std::string> rubric_texts;
  std::vector<Example> example_pool;
  std::vector<Criterion> criterion_order;

  bool is_holistic() const { return rubric_texts.contains(std::string(kOverall)); }
};

struct ExampleTriple {
  std::size_t high = 0;
  std::size_t medium = 0;
  std::size_t low = 0;
};

/// high: per-criterion maximum of the pool on every criterion; low: minimum
/// on every criterion; medium: the remaining item closest to the per-criterion
/// midpoints (sum of |score - (min + max) / 2|). Earliest pool position wins
/// ties.
ExampleTriple select_examples(std::span<const Example> pool);

/// Prompts for one item under `condition`, in call order. Every prompt is
/// laid out as: context, rubric, examples, item, answer instruction.
std::vector<std::string> assemble_prompts(const RubricCondition& condition, const RubricBundle& bundle,
                                          const std::string& item_text);

/// Criteria answered by each prompt returned from assemble_prompts.
std::vector<std::vector<Criterion>> prompt_criteria(const RubricCondition& condition,
                                                    const RubricBundle& bundle);

}  // namespace rubeval
