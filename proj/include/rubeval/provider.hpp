#pragma once

// Autorater provider seam and the offline replay store.
//
// Replay store: a directory holding one `<prompt_hash>.json` file per
// prompt, each a JSON object
//   {"prompt_hash": ..., "prompt_text": ..., "answer_tokens": [[token, logprob], ...], "raw_text": ...}
// Batch prompts that answer several criteria may add "answer_positions",
// an array with one [[token, logprob], ...] list per answered criterion.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rubeval/model.hpp"
#include "rubeval/promptkit.hpp"
#include "rubeval/scoring.hpp"

namespace rubeval {

/// Lowercase hex SHA-256 of the prompt's UTF-8 bytes.
std::string prompt_hash(std::string_view prompt);

struct ProviderRequest {
  std::string prompt;
  int top_logprobs = 20;
};

struct ProviderResponse {
  std::string prompt_hash;
  std::string prompt_text;
  std::vector<TokenLogprob> answer_tokens;
  std::vector<std::vector<TokenLogprob>> answer_positions;
  std::string raw_text;
};

nlohmann::json response_to_json(const ProviderResponse& response);
ProviderResponse response_from_json(const nlohmann::json& j);

class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderResponse send(const ProviderRequest& request) = 0;
};

class ReplayProvider : public Provider {
 public:
  explicit ReplayProvider(std::filesystem::path store);

  ProviderResponse send(const ProviderRequest& request) override;
  bool contains(std::string_view hash) const;
  std::filesystem::path record_path(std::string_view hash) const;

 private:
  std::filesystem::path store_;
};

void write_replay_record(const std::filesystem::path& store, const ProviderResponse& response);

/// One response per request, in request order. Requests may be in flight
/// concurrently when threads > 1. A response without answer tokens is a
/// ProviderFailure.
std::vector<ProviderResponse> query(Provider& provider, std::span<const ProviderRequest> requests,
                                    unsigned threads = 1);

/// Score distributions answered by one response: a single distribution from
/// answer_tokens when `n_answers` is 1, otherwise one per answer position.
std::vector<ScoreDistribution> response_distributions(const ProviderResponse& response, const ScoreScale& scale,
                                                      std::size_t n_answers);

/// Queries every prompt of `condition` for one item and returns the
/// autorater records, one per answered criterion (OVERALL for holistic).
std::vector<RatingRecord> rate_item(Provider& provider, const RubricCondition& condition,
                                    const RubricBundle& bundle, const std::string& item_id,
                                    const std::string& item_text, const std::string& rater_id,
                                    unsigned threads = 1);

}  // namespace rubeval
