#pragma once

// JSON forms of rubric bundles and prompt items.
//
// Bundle:
//   {"domain": "AES", "scale": {"min": 1, "max": 6}, "context": "...",
//    "rubrics": {"ideas": "...", ...}, "criteria": ["ideas", ...],
//    "examples": [{"text": "...", "scores": {"ideas": 5}, "explanation": "..."}]}
// A holistic bundle has rubrics {"OVERALL": "..."} and no criteria.
//
// Items (JSONL): {"item_id": "...", "text": "...", "rubrics": {...}, "criteria": [...]}
// where rubrics/criteria optionally replace the bundle's, as IF items carry
// their own decomposed questions.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rubeval/promptkit.hpp"

namespace rubeval {

/// IF examples may give a "follow_ratio" score instead of OVERALL; holistic
/// bundles then label them through anchor_holistic_score.
RubricBundle bundle_from_json(const nlohmann::json& j);
RubricBundle load_bundle(const std::filesystem::path& path);

struct PromptItem {
  std::string item_id;
  std::string text;
  std::map<Criterion, std::string> rubrics;
  std::vector<Criterion> criteria;
};

std::vector<PromptItem> load_items(const std::filesystem::path& path);

/// The bundle specialized to one item (its own rubric texts, if any).
RubricBundle bundle_for_item(const RubricBundle& bundle, const PromptItem& item);

}  // namespace rubeval
