#include "rubeval/promptkit.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rubeval/error.hpp"

namespace rubeval {

ExampleTriple select_examples(std::span<const Example> pool) {
  if (pool.size() < 3) {
    throw Error(ErrorCode::InsufficientPool, fmt::format("{} examples, need at least 3", pool.size()));
  }
  const auto& criteria = pool.front().scores;
  if (criteria.empty()) throw Error(ErrorCode::CriterionSetMismatch, "examples carry no scores");
  for (const auto& ex : pool) {
    bool same = ex.scores.size() == criteria.size();
    for (auto a = ex.scores.begin(), b = criteria.begin(); same && a != ex.scores.end(); ++a, ++b) {
      same = a->first == b->first;
    }
    if (!same) throw Error(ErrorCode::CriterionSetMismatch, "examples are scored on different criteria");
  }

  std::map<Criterion, std::pair<double, double>> range;
  for (const auto& [c, v] : criteria) range[c] = {v, v};
  for (const auto& ex : pool) {
    for (const auto& [c, v] : ex.scores) {
      auto& [lo, hi] = range[c];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }

  auto all_at = [&](const Example& ex, bool top) {
    for (const auto& [c, v] : ex.scores) {
      if (v != (top ? range[c].second : range[c].first)) return false;
    }
    return true;
  };

  constexpr auto none = std::numeric_limits<std::size_t>::max();
  std::size_t high = none;
  std::size_t low = none;
  for (std::size_t i = 0; i < pool.size() && high == none; ++i) {
    if (all_at(pool[i], true)) high = i;
  }
  for (std::size_t i = 0; i < pool.size() && low == none; ++i) {
    if (i != high && all_at(pool[i], false)) low = i;
  }
  if (high == none || low == none) {
    throw Error(ErrorCode::NoDominatingExample,
                high == none ? "no example is highest on every criterion"
                             : "no example is lowest on every criterion");
  }

  std::size_t medium = none;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (i == high || i == low) continue;
    double distance = 0.0;
    for (const auto& [c, v] : pool[i].scores) {
      distance += std::abs(v - (range[c].first + range[c].second) / 2.0);
    }
    if (distance < best) {
      best = distance;
      medium = i;
    }
  }
  return {high, medium, low};
}

namespace {

void check_bundle(const RubricCondition& condition, const RubricBundle& bundle) {
  validate_condition(condition);
  bool holistic = condition.decomposition == Decomposition::Holistic;
  if (holistic) {
    if (!bundle.is_holistic() || bundle.rubric_texts.size() != 1) {
      throw Error(ErrorCode::ConditionBundleMismatch, "holistic condition needs exactly the OVERALL rubric");
    }
  } else {
    if (bundle.is_holistic() || bundle.criterion_order.empty()) {
      throw Error(ErrorCode::ConditionBundleMismatch, "analytic condition needs per-criterion rubrics");
    }
    if (bundle.rubric_texts.size() != bundle.criterion_order.size()) {
      throw Error(ErrorCode::ConditionBundleMismatch, "rubric texts and criterion order disagree");
    }
    for (const auto& c : bundle.criterion_order) {
      if (!bundle.rubric_texts.contains(c)) {
        throw Error(ErrorCode::ConditionBundleMismatch, fmt::format("no rubric text for '{}'", c));
      }
    }
  }
  if (condition.edited && !bundle.context_block) {
    throw Error(ErrorCode::MissingContextBlock, "edited prompts carry a context block");
  }
  if (condition.examples != ExampleRegime::ZeroEx && bundle.example_pool.empty()) {
    throw Error(ErrorCode::MissingExamples,
                fmt::format("{} needs examples but the pool is empty", format_condition(condition)));
  }
}

std::string format_score(double v) {
  if (v == std::floor(v)) return fmt::format("{}", static_cast<long long>(v));
  return fmt::format("{}", v);
}

std::string subject(const RubricBundle& b) { return b.domain == Domain::AES ? "essay" : "response"; }

std::string rubric_section(const RubricBundle& b, const std::vector<Criterion>& criteria, bool holistic) {
  if (holistic) return "Rubric:\n" + b.rubric_texts.at(std::string(kOverall));
  std::string out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (i > 0) out += "\n\n";
    const auto& text = b.rubric_texts.at(criteria[i]);
    if (b.domain == Domain::IF) {
      out += criteria.size() == 1 ? fmt::format("Question: {}", text)
                                  : fmt::format("Question {}: {}", i + 1, text);
    } else {
      out += fmt::format("Rubric for the attribute \"{}\":\n{}", criteria[i], text);
    }
  }
  return out;
}

std::string example_block(const RubricBundle& b, const Example& ex, std::size_t number,
                          const std::vector<Criterion>& criteria, bool holistic) {
  std::string out = fmt::format("EXAMPLE {}:\n{}", number, ex.text);
  for (const auto& c : criteria) {
    auto it = ex.scores.find(c);
    if (it == ex.scores.end()) continue;
    if (holistic) {
      out += fmt::format("\nScore: {}", format_score(it->second));
    } else if (b.scale.kind == ScaleKind::BinaryYesNo) {
      out += fmt::format("\nAnswer ({}): {}", c, it->second >= 0.5 ? "YES" : "NO");
    } else {
      out += fmt::format("\nScore ({}): {}", c, format_score(it->second));
    }
  }
  if (ex.explanation) out += "\nExplanation: " + *ex.explanation;
  return out;
}

std::string answer_instruction(const RubricBundle& b, const std::vector<Criterion>& criteria, bool holistic) {
  if (!holistic && b.scale.kind == ScaleKind::BinaryYesNo) {
    std::string out =
        "Based on the provided Input and Generated Text, answer the following Question with either a YES or NO "
        "choice.";
    if (criteria.size() > 1) out += " Give one answer per numbered Question, one per line, in order.";
    return out;
  }
  std::string out = fmt::format("Score the {} on a scale from {} to {}", subject(b), b.scale.min_score,
                                b.scale.max_score);
  if (holistic) return out + ".";
  if (criteria.size() == 1) return out + " on the attribute.";
  out += " on each attribute. Give one score per line, in this order:";
  for (std::size_t i = 0; i < criteria.size(); ++i) out += fmt::format(" {}. {}", i + 1, criteria[i]);
  return out;
}

std::string render(const RubricBundle& b, const std::vector<Criterion>& criteria, bool holistic,
                   const std::vector<std::size_t>& examples, const std::string& item_text) {
  std::vector<std::string> sections;
  if (b.context_block) sections.push_back(*b.context_block);
  sections.push_back(rubric_section(b, criteria, holistic));
  if (!examples.empty()) {
    std::string block = "Examples:";
    for (std::size_t k = 0; k < examples.size(); ++k) {
      block += "\n\n" + example_block(b, b.example_pool[examples[k]], k + 1, criteria, holistic);
    }
    sections.push_back(std::move(block));
  }
  sections.push_back(fmt::format("{}:\n{}", b.domain == Domain::AES ? "Essay" : "Response", item_text));
  sections.push_back(answer_instruction(b, criteria, holistic));

  std::string out;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += sections[i];
  }
  return out;
}

}  // namespace

std::vector<std::vector<Criterion>> prompt_criteria(const RubricCondition& condition, const RubricBundle& bundle) {
  check_bundle(condition, bundle);
  if (condition.decomposition == Decomposition::Holistic) return {{std::string(kOverall)}};
  if (condition.call_strategy == CallStrategy::Batch) return {bundle.criterion_order};
  std::vector<std::vector<Criterion>> out;
  for (const auto& c : bundle.criterion_order) out.push_back({c});
  return out;
}

std::vector<std::string> assemble_prompts(const RubricCondition& condition, const RubricBundle& bundle,
                                          const std::string& item_text) {
  auto groups = prompt_criteria(condition, bundle);

  std::vector<std::size_t> examples;
  switch (condition.examples) {
    case ExampleRegime::Full:
      for (std::size_t i = 0; i < bundle.example_pool.size(); ++i) examples.push_back(i);
      break;
    case ExampleRegime::ThreeEx: {
      auto t = select_examples(bundle.example_pool);
      examples = {t.high, t.medium, t.low};
      break;
    }
    case ExampleRegime::ZeroEx:
      break;
  }

  bool holistic = condition.decomposition == Decomposition::Holistic;
  std::vector<std::string> prompts;
  prompts.reserve(groups.size());
  for (const auto& criteria : groups) {
    prompts.push_back(render(bundle, criteria, holistic, examples, item_text));
  }
  return prompts;
}

}  // namespace rubeval
