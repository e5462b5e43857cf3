#include "rubeval/records_io.hpp"

#include <fstream>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "rubeval/error.hpp"
#include "rubeval/scoring.hpp"

namespace rubeval {

nlohmann::json condition_to_json(const RubricCondition& c) {
  return {{"decomposition", std::string(to_string(c.decomposition))},
          {"examples", std::string(to_string(c.examples))},
          {"call_strategy", std::string(to_string(c.call_strategy))},
          {"edited", c.edited}};
}

RubricCondition condition_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_condition(j.get<std::string>());
  RubricCondition c;
  c.decomposition = parse_decomposition(j.at("decomposition").get<std::string>());
  c.examples = parse_example_regime(j.at("examples").get<std::string>());
  c.call_strategy = parse_call_strategy(j.value("call_strategy", std::string("na")));
  c.edited = j.value("edited", false);
  validate_condition(c);
  return c;
}

nlohmann::json record_to_json(const RatingRecord& r, Domain domain, const ScaleManifest& scales) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["item_id"] = r.item_id;
  j["rater_id"] = r.rater_id;
  j["rater_kind"] = std::string(to_string(r.rater_kind));
  j["domain"] = std::string(to_string(domain));
  j["condition"] = condition_to_json(r.condition);
  j["criterion"] = r.criterion;
  j["value"] = r.value;
  if (r.distribution) {
    auto tokens = nlohmann::json::array();
    for (const auto& [tok, lp] : distribution_tokens(*r.distribution, scales.for_condition(r.condition))) {
      tokens.push_back({tok, lp});
    }
    j["answer_tokens"] = tokens;
  }
  return j;
}

RatingRecord record_from_json(const nlohmann::json& j, Domain domain, const ScaleManifest& scales) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "record is not a JSON object");
  RatingRecord r;
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(ErrorCode::SchemaVersionMismatch,
                  fmt::format("schema_version {} (expected {})", j.at("schema_version").dump(), kSchemaVersion));
    }
    auto record_domain = parse_domain(j.at("domain").get<std::string>());
    if (record_domain != domain) {
      throw Error(ErrorCode::ParseError,
                  fmt::format("record domain {} in a {} experiment", to_string(record_domain), to_string(domain)));
    }
    r.item_id = j.at("item_id").get<std::string>();
    r.rater_id = j.at("rater_id").get<std::string>();
    r.rater_kind = parse_rater_kind(j.at("rater_kind").get<std::string>());
    try {
      r.condition = condition_from_json(j.at("condition"));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidCondition) throw;
      throw Error(ErrorCode::SchemaVersionMismatch, e.detail());
    }
    r.criterion = j.at("criterion").get<std::string>();

    const auto& scale = scales.for_condition(r.condition);
    if (j.contains("answer_tokens")) {
      std::vector<TokenLogprob> tokens;
      for (const auto& pair : j.at("answer_tokens")) {
        if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::ParseError, "answer token must be [token, logprob]");
        tokens.emplace_back(pair[0].get<std::string>(), pair[1].get<double>());
      }
      r.distribution = parse_answer_tokens(tokens, scale);
      r.value = j.contains("value") ? j.at("value").get<double>() : weighted_score(*r.distribution, scale);
    } else {
      r.value = j.at("value").get<double>();
    }
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  validate_record(r, scales.for_condition(r.condition));
  return r;
}

std::vector<RatingRecord> ingest(const std::filesystem::path& path, Domain domain, const ScaleManifest& scales) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot open {}", path.string()));

  std::vector<RatingRecord> records;
  std::set<std::tuple<std::string, std::string, std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto where = fmt::format("{}:{}", path.string(), line_no);
    try {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
      }
      RatingRecord r;
      try {
        r = record_from_json(j, domain, scales);
      } catch (const Error& e) {
        // unknown enum spellings surface as InvalidArgument
        if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::ParseError, e.detail());
        throw;
      }
      auto key = std::make_tuple(r.item_id, r.rater_id, format_condition(r.condition), r.criterion);
      if (!seen.insert(key).second) {
        throw Error(ErrorCode::DuplicateRecord,
                    fmt::format("item {} rater {} {} {} already seen", r.item_id, r.rater_id,
                                format_condition(r.condition), r.criterion));
      }
      records.push_back(std::move(r));
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("{}: {}", where, e.detail()));
    }
  }
  return records;
}

void write_records(const std::filesystem::path& path, const std::vector<RatingRecord>& records, Domain domain,
                   const ScaleManifest& scales) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot write {}", path.string()));
  for (const auto& r : records) out << record_to_json(r, domain, scales).dump() << '\n';
}

}  // namespace rubeval
