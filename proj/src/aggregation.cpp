#include "rubeval/aggregation.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "rubeval/error.hpp"

namespace rubeval {

std::string_view to_string(Preference p) {
  switch (p) {
    case Preference::First: return "First";
    case Preference::Second: return "Second";
    case Preference::Tie: return "Tie";
    case Preference::Incomparable: return "Incomparable";
  }
  return "?";
}

Preference pareto_compare(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || a.size() != b.size()) {
    throw Error(ErrorCode::CriterionSetMismatch,
                fmt::format("cannot compare {} against {} criteria", a.size(), b.size()));
  }
  bool a_higher = false;
  bool b_higher = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) a_higher = true;
    if (b[i] > a[i]) b_higher = true;
  }
  if (a_higher && b_higher) return Preference::Incomparable;
  if (a_higher) return Preference::First;
  if (b_higher) return Preference::Second;
  return Preference::Tie;
}

Preference pareto_compare(const CriterionScores& a, const CriterionScores& b) {
  if (a.empty() || a.size() != b.size()) {
    throw Error(ErrorCode::CriterionSetMismatch,
                fmt::format("cannot compare {} against {} criteria", a.size(), b.size()));
  }
  std::vector<double> va, vb;
  va.reserve(a.size());
  vb.reserve(b.size());
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first) {
      throw Error(ErrorCode::CriterionSetMismatch,
                  fmt::format("criterion '{}' has no counterpart '{}'", ia->first, ib->first));
    }
    va.push_back(ia->second);
    vb.push_back(ib->second);
  }
  return pareto_compare(std::span<const double>(va), std::span<const double>(vb));
}

double follow_ratio(std::span<const double> answers) {
  if (answers.empty()) throw Error(ErrorCode::EmptyAnswerList, "no answers to aggregate");
  double followed = 0.0;
  for (double a : answers) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw Error(ErrorCode::AnswerOutOfRange, fmt::format("answer {} outside [0, 1]", a));
    }
    followed += a;
  }
  return followed / static_cast<double>(answers.size());
}

Preference scalar_compare(double a, double b, double tie_epsilon) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::NonFiniteValue, fmt::format("cannot compare {} with {}", a, b));
  }
  if (!(tie_epsilon >= 0.0) || !std::isfinite(tie_epsilon)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("tie epsilon {} must be finite and >= 0", tie_epsilon));
  }
  if (a > b + tie_epsilon) return Preference::First;
  if (b > a + tie_epsilon) return Preference::Second;
  return Preference::Tie;
}

double anchor_holistic_score(double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw Error(ErrorCode::AnswerOutOfRange, fmt::format("ratio {} outside [0, 1]", ratio));
  }
  // (0, 1), (0.5, 3), (1, 5) are collinear
  return 1.0 + 4.0 * ratio;
}

double consolidate(const std::map<std::string, double>& values, const ConsolidationPolicy& policy) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "no rater scores to consolidate");
  switch (policy.kind) {
    case ConsolidationKind::AverageAll: {
      double sum = 0.0;
      for (const auto& [rater, v] : values) sum += v;
      return sum / static_cast<double>(values.size());
    }
    case ConsolidationKind::SingleRater: {
      auto it = values.find(policy.designated_rater);
      if (it == values.end()) {
        throw Error(ErrorCode::MissingDesignatedRater,
                    fmt::format("rater '{}' has no score", policy.designated_rater));
      }
      return it->second;
    }
    case ConsolidationKind::MajorityVote: {
      if (values.size() % 2 == 0) {
        throw Error(ErrorCode::EvenVoterCount, fmt::format("{} voters can split evenly", values.size()));
      }
      std::size_t ones = 0;
      for (const auto& [rater, v] : values) {
        if (v != 0.0 && v != 1.0) {
          throw Error(ErrorCode::NonBinaryMajorityInput, fmt::format("rater '{}' voted {}", rater, v));
        }
        if (v == 1.0) ++ones;
      }
      return 2 * ones > values.size() ? 1.0 : 0.0;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown consolidation policy");
}

}  // namespace rubeval
