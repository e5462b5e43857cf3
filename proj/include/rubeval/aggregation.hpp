#pragma once

// Pairwise preferences from scalar scores and sub-criterion vectors, plus
// consolidation of several raters' scores into one.

#include <map>
#include <span>
#include <string>
#include <string_view>

#include "rubeval/model.hpp"

namespace rubeval {

enum class Preference { First, Second, Tie, Incomparable };

constexpr Preference reversed(Preference p) {
  switch (p) {
    case Preference::First: return Preference::Second;
    case Preference::Second: return Preference::First;
    default: return p;
  }
}

constexpr bool is_strict(Preference p) { return p == Preference::First || p == Preference::Second; }

std::string_view to_string(Preference p);

using CriterionScores = std::map<Criterion, double>;

/// Pareto dominance: `a` wins when it is at least tied on every criterion and
/// strictly higher on one. Throws CriterionSetMismatch unless both maps cover
/// the same nonempty criterion set.
Preference pareto_compare(const CriterionScores& a, const CriterionScores& b);

/// Positional form of pareto_compare for vectors sharing a criterion order.
Preference pareto_compare(std::span<const double> a, std::span<const double> b);

/// Fraction of answers marked followed. Answers are 0/1 for discrete raters
/// or yes-probabilities in [0, 1] for weighted autorater answers.
double follow_ratio(std::span<const double> answers);

/// First if a > b + eps, Second if b > a + eps, Tie otherwise.
Preference scalar_compare(double a, double b, double tie_epsilon = 0.0);

/// Piecewise-linear map from a follow ratio onto the holistic scale through
/// the anchors 0% -> 1, 50% -> 3, 100% -> 5.
double anchor_holistic_score(double ratio);

enum class ConsolidationKind { AverageAll, SingleRater, MajorityVote };

struct ConsolidationPolicy {
  ConsolidationKind kind = ConsolidationKind::AverageAll;
  std::string designated_rater;  // SingleRater only

  static ConsolidationPolicy average() { return {}; }
  static ConsolidationPolicy single(std::string rater) {
    return {ConsolidationKind::SingleRater, std::move(rater)};
  }
  static ConsolidationPolicy majority() { return {ConsolidationKind::MajorityVote, {}}; }

  friend bool operator==(const ConsolidationPolicy&, const ConsolidationPolicy&) = default;
};

double consolidate(const std::map<std::string, double>& values, const ConsolidationPolicy& policy);

}  // namespace rubeval
