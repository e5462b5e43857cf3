#pragma once

// Line-delimited JSON rating records.
//
//   {"schema_version": 1, "item_id": "e17", "rater_id": "gpt", "rater_kind": "autorater",
//    "domain": "AES",
//    "condition": {"decomposition": "analytic", "examples": "0ex", "call_strategy": "separate", "edited": false},
//    "criterion": "ideas", "value": 3.62, "answer_tokens": [["4", -0.4], ["3", -1.3]]}
//
// `condition` may also be given in compact form ("analytic/separate/0ex").
// `value` may be omitted when `answer_tokens` is present; it is then the
// probability-weighted score of the tokens.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rubeval/model.hpp"

namespace rubeval {

inline constexpr int kSchemaVersion = 1;

struct ScaleManifest {
  ScoreScale holistic = ScoreScale::integer(1, 6);
  ScoreScale analytic = ScoreScale::integer(1, 6);

  const ScoreScale& for_condition(const RubricCondition& c) const {
    return c.decomposition == Decomposition::Holistic ? holistic : analytic;
  }
};

nlohmann::json condition_to_json(const RubricCondition& condition);
RubricCondition condition_from_json(const nlohmann::json& j);

nlohmann::json record_to_json(const RatingRecord& record, Domain domain, const ScaleManifest& scales);

/// Parses and validates one record. Throws SchemaVersionMismatch for a wrong
/// schema version or a condition that breaks the rubric-condition invariants.
RatingRecord record_from_json(const nlohmann::json& j, Domain domain, const ScaleManifest& scales);

/// Reads a JSONL file. Blank lines are skipped. Errors carry "path:line".
/// Records sharing (item, rater, condition, criterion) are rejected.
std::vector<RatingRecord> ingest(const std::filesystem::path& path, Domain domain, const ScaleManifest& scales);

void write_records(const std::filesystem::path& path, const std::vector<RatingRecord>& records, Domain domain,
                   const ScaleManifest& scales);

}  // namespace rubeval
