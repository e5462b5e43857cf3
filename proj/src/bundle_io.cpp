#include "rubeval/bundle_io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "rubeval/aggregation.hpp"
#include "rubeval/error.hpp"
#include "rubeval/pipeline.hpp"

namespace rubeval {

RubricBundle bundle_from_json(const nlohmann::json& j) {
  try {
    RubricBundle b;
    b.domain = parse_domain(j.at("domain").get<std::string>());
    b.scale = scale_from_json(j.at("scale"));
    if (j.contains("context") && !j.at("context").is_null()) b.context_block = j.at("context").get<std::string>();
    b.rubric_texts = j.at("rubrics").get<std::map<std::string, std::string>>();
    b.criterion_order = j.value("criteria", std::vector<std::string>{});
    for (const auto& ej : j.value("examples", nlohmann::json::array())) {
      Example ex;
      ex.text = ej.at("text").get<std::string>();
      ex.scores = ej.value("scores", CriterionScores{});
      if (ej.contains("explanation")) ex.explanation = ej.at("explanation").get<std::string>();
      if (b.is_holistic() && b.domain == Domain::IF && !ex.scores.contains(std::string(kOverall))) {
        auto ratio = ex.scores.find("follow_ratio");
        if (ratio != ex.scores.end()) {
          ex.scores = {{std::string(kOverall), anchor_holistic_score(ratio->second)}};
        }
      }
      b.example_pool.push_back(std::move(ex));
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, fmt::format("bundle: {}", e.what()));
  }
}

RubricBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, fmt::format("cannot open bundle {}", path.string()));
  try {
    return bundle_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::vector<PromptItem> load_items(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot open items {}", path.string()));
  std::vector<PromptItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      PromptItem item;
      item.item_id = j.at("item_id").get<std::string>();
      item.text = j.at("text").get<std::string>();
      item.rubrics = j.value("rubrics", std::map<std::string, std::string>{});
      item.criteria = j.value("criteria", std::vector<std::string>{});
      items.push_back(std::move(item));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return items;
}

RubricBundle bundle_for_item(const RubricBundle& bundle, const PromptItem& item) {
  RubricBundle b = bundle;
  if (!item.rubrics.empty()) {
    b.rubric_texts = item.rubrics;
    b.criterion_order = item.criteria;
  }
  return b;
}

}  // namespace rubeval
