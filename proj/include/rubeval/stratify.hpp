#pragma once

// Partition items by how much their human raters agree with each other.

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rubeval {

enum class AgreementLevel { Agree, Disagree, FullAgreement, PartialAgreement, FullDisagreement };

std::string_view to_string(AgreementLevel level);

/// Level of one item from its raw rater scores (2 or 3 raters, exact equality).
AgreementLevel classify_agreement(std::span<const double> scores);

/// Item ids per level, in ascending item-id order. Levels that receive no
/// items are still present (empty), so two-rater input yields {Agree,
/// Disagree} and three-rater input the three-way split.
using AgreementPartition = std::map<AgreementLevel, std::vector<std::string>>;

AgreementPartition partition_by_agreement(
    const std::map<std::string, std::map<std::string, double>>& per_item_scores);

}  // namespace rubeval
