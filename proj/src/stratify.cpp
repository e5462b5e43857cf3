#include "rubeval/stratify.hpp"

#include <fmt/format.h>

#include "rubeval/error.hpp"

namespace rubeval {

std::string_view to_string(AgreementLevel level) {
  switch (level) {
    case AgreementLevel::Agree: return "agree";
    case AgreementLevel::Disagree: return "disagree";
    case AgreementLevel::FullAgreement: return "full_agreement";
    case AgreementLevel::PartialAgreement: return "partial_agreement";
    case AgreementLevel::FullDisagreement: return "full_disagreement";
  }
  return "?";
}

AgreementLevel classify_agreement(std::span<const double> s) {
  if (s.size() == 2) return s[0] == s[1] ? AgreementLevel::Agree : AgreementLevel::Disagree;
  if (s.size() == 3) {
    int equal_pairs = (s[0] == s[1]) + (s[0] == s[2]) + (s[1] == s[2]);
    if (equal_pairs == 3) return AgreementLevel::FullAgreement;
    if (equal_pairs == 1) return AgreementLevel::PartialAgreement;
    return AgreementLevel::FullDisagreement;
  }
  throw Error(ErrorCode::UnsupportedRaterCount, fmt::format("{} raters per item", s.size()));
}

AgreementPartition partition_by_agreement(
    const std::map<std::string, std::map<std::string, double>>& per_item_scores) {
  AgreementPartition out;
  if (per_item_scores.empty()) return out;

  std::size_t raters = per_item_scores.begin()->second.size();
  if (raters != 2 && raters != 3) {
    throw Error(ErrorCode::UnsupportedRaterCount, fmt::format("{} raters per item", raters));
  }
  if (raters == 2) {
    out[AgreementLevel::Agree];
    out[AgreementLevel::Disagree];
  } else {
    out[AgreementLevel::FullAgreement];
    out[AgreementLevel::PartialAgreement];
    out[AgreementLevel::FullDisagreement];
  }

  std::vector<double> scores;
  for (const auto& [item, by_rater] : per_item_scores) {
    if (by_rater.size() != raters) {
      throw Error(ErrorCode::InconsistentRaterCount,
                  fmt::format("item {} has {} raters, expected {}", item, by_rater.size(), raters));
    }
    scores.clear();
    for (const auto& [rater, v] : by_rater) scores.push_back(v);
    out[classify_agreement(scores)].push_back(item);
  }
  return out;
}

}  // namespace rubeval
