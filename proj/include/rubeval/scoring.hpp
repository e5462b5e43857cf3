#pragma once

// Autorater log-probabilities -> probability-weighted rating.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rubeval/model.hpp"

namespace rubeval {

using TokenLogprob = std::pair<std::string, double>;

/// Probability-weighted expected score: sum_i softmax(logprob)_i * score_i.
/// Normalization uses max-subtraction so realistic logprobs cannot underflow.
double weighted_score(const ScoreDistribution& dist, const ScoreScale& scale);

/// Throws unless entries are nonempty, distinct, in scale and finite.
void validate_distribution(const ScoreDistribution& dist, const ScoreScale& scale);

/// Keeps tokens that denote a score on `scale`: bare integers for integer
/// scales, "yes"/"no" (any case) for binary scales. Surrounding whitespace
/// is ignored, repeated scores are merged by log-sum-exp, and entries keep
/// first-occurrence order.
ScoreDistribution parse_answer_tokens(std::span<const TokenLogprob> tokens, const ScoreScale& scale);

/// Inverse of parse_answer_tokens for serialization.
std::vector<TokenLogprob> distribution_tokens(const ScoreDistribution& dist, const ScoreScale& scale);

}  // namespace rubeval
