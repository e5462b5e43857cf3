#include "rubeval/provider.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "rubeval/error.hpp"
#include "rubeval/parallel.hpp"

namespace rubeval {

std::string prompt_hash(std::string_view prompt) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(prompt.data(), prompt.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

namespace {

nlohmann::json tokens_to_json(const std::vector<TokenLogprob>& tokens) {
  auto arr = nlohmann::json::array();
  for (const auto& [tok, lp] : tokens) arr.push_back({tok, lp});
  return arr;
}

std::vector<TokenLogprob> tokens_from_json(const nlohmann::json& j) {
  std::vector<TokenLogprob> out;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("token entry must be [token, logprob]");
    out.emplace_back(pair[0].get<std::string>(), pair[1].get<double>());
  }
  return out;
}

}  // namespace

nlohmann::json response_to_json(const ProviderResponse& r) {
  nlohmann::json j;
  j["prompt_hash"] = r.prompt_hash;
  j["prompt_text"] = r.prompt_text;
  j["answer_tokens"] = tokens_to_json(r.answer_tokens);
  j["raw_text"] = r.raw_text;
  if (!r.answer_positions.empty()) {
    auto positions = nlohmann::json::array();
    for (const auto& p : r.answer_positions) positions.push_back(tokens_to_json(p));
    j["answer_positions"] = positions;
  }
  return j;
}

ProviderResponse response_from_json(const nlohmann::json& j) {
  try {
    ProviderResponse r;
    r.prompt_hash = j.at("prompt_hash").get<std::string>();
    r.prompt_text = j.at("prompt_text").get<std::string>();
    r.answer_tokens = tokens_from_json(j.at("answer_tokens"));
    r.raw_text = j.value("raw_text", std::string{});
    if (j.contains("answer_positions")) {
      for (const auto& p : j.at("answer_positions")) r.answer_positions.push_back(tokens_from_json(p));
    }
    return r;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ProviderFailure, fmt::format("malformed response record: {}", e.what()));
  }
}

ReplayProvider::ReplayProvider(std::filesystem::path store) : store_(std::move(store)) {}

std::filesystem::path ReplayProvider::record_path(std::string_view hash) const {
  return store_ / (std::string(hash) + ".json");
}

bool ReplayProvider::contains(std::string_view hash) const {
  return std::filesystem::is_regular_file(record_path(hash));
}

ProviderResponse ReplayProvider::send(const ProviderRequest& request) {
  auto hash = prompt_hash(request.prompt);
  std::ifstream in(record_path(hash));
  if (!in) throw Error(ErrorCode::ReplayMiss, fmt::format("no recorded response for prompt {}", hash));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ProviderFailure, fmt::format("record {} is not JSON: {}", hash, e.what()));
  }
  auto response = response_from_json(j);
  if (response.prompt_hash != hash) {
    throw Error(ErrorCode::ProviderFailure,
                fmt::format("record {} claims hash {}", hash, response.prompt_hash));
  }
  return response;
}

void write_replay_record(const std::filesystem::path& store, const ProviderResponse& response) {
  std::filesystem::create_directories(store);
  auto path = store / (response.prompt_hash + ".json");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot write {}", path.string()));
  out << response_to_json(response).dump(2) << '\n';
}

std::vector<ProviderResponse> query(Provider& provider, std::span<const ProviderRequest> requests,
                                    unsigned threads) {
  std::vector<ProviderResponse> responses(requests.size());
  parallel_for(requests.size(), threads, [&](std::size_t i) {
    responses[i] = provider.send(requests[i]);
    const auto& r = responses[i];
    bool empty = r.answer_tokens.empty() && r.answer_positions.empty();
    for (const auto& p : r.answer_positions) empty = empty || p.empty();
    if (empty) {
      throw Error(ErrorCode::ProviderFailure, fmt::format("response to request {} has no answer tokens", i));
    }
  });
  return responses;
}

std::vector<ScoreDistribution> response_distributions(const ProviderResponse& response, const ScoreScale& scale,
                                                      std::size_t n_answers) {
  std::vector<ScoreDistribution> out;
  if (n_answers == 1 && response.answer_positions.empty()) {
    out.push_back(parse_answer_tokens(response.answer_tokens, scale));
    return out;
  }
  if (response.answer_positions.size() != n_answers) {
    throw Error(ErrorCode::ProviderFailure,
                fmt::format("expected {} answer positions, response has {}", n_answers,
                            response.answer_positions.size()));
  }
  for (const auto& p : response.answer_positions) out.push_back(parse_answer_tokens(p, scale));
  return out;
}

std::vector<RatingRecord> rate_item(Provider& provider, const RubricCondition& condition,
                                    const RubricBundle& bundle, const std::string& item_id,
                                    const std::string& item_text, const std::string& rater_id,
                                    unsigned threads) {
  auto groups = prompt_criteria(condition, bundle);
  auto prompts = assemble_prompts(condition, bundle, item_text);
  std::vector<ProviderRequest> requests;
  for (auto& p : prompts) requests.push_back({std::move(p)});
  auto responses = query(provider, requests, threads);

  std::vector<RatingRecord> records;
  for (std::size_t k = 0; k < responses.size(); ++k) {
    auto dists = response_distributions(responses[k], bundle.scale, groups[k].size());
    for (std::size_t c = 0; c < dists.size(); ++c) {
      RatingRecord r;
      r.item_id = item_id;
      r.rater_id = rater_id;
      r.rater_kind = RaterKind::Autorater;
      r.condition = condition;
      r.criterion = groups[k][c];
      r.value = weighted_score(dists[c], bundle.scale);
      r.distribution = std::move(dists[c]);
      records.push_back(std::move(r));
    }
  }
  return records;
}

}  // namespace rubeval
