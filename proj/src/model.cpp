#include "rubeval/model.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "rubeval/error.hpp"
#include "rubeval/scoring.hpp"

namespace rubeval {

ScoreScale ScoreScale::integer(int min_score, int max_score) {
  ScoreScale scale{min_score, max_score, ScaleKind::IntegerScale};
  validate_scale(scale);
  return scale;
}

ScoreScale ScoreScale::binary() { return ScoreScale{0, 1, ScaleKind::BinaryYesNo}; }

void validate_scale(const ScoreScale& scale) {
  if (scale.min_score >= scale.max_score) {
    throw Error(ErrorCode::InvalidScale,
                fmt::format("min_score {} must be below max_score {}", scale.min_score, scale.max_score));
  }
  if (scale.kind == ScaleKind::BinaryYesNo && (scale.min_score != 0 || scale.max_score != 1)) {
    throw Error(ErrorCode::InvalidScale, "binary yes/no scale must span 0..1");
  }
}

RubricCondition RubricCondition::holistic(ExampleRegime examples) {
  return {Decomposition::Holistic, examples, CallStrategy::NotApplicable, false};
}

RubricCondition RubricCondition::analytic(CallStrategy strategy, ExampleRegime examples) {
  RubricCondition c{Decomposition::Analytic, examples, strategy, false};
  validate_condition(c);
  return c;
}

RubricCondition RubricCondition::edited_analytic() {
  return {Decomposition::Analytic, ExampleRegime::ThreeEx, CallStrategy::Separate, true};
}

void validate_condition(const RubricCondition& c) {
  if (c.decomposition == Decomposition::Holistic) {
    if (c.call_strategy != CallStrategy::NotApplicable) {
      throw Error(ErrorCode::InvalidCondition, "holistic conditions have no call strategy");
    }
    if (c.edited) {
      throw Error(ErrorCode::InvalidCondition, "edited applies to analytic conditions only");
    }
    return;
  }
  if (c.call_strategy == CallStrategy::NotApplicable) {
    throw Error(ErrorCode::InvalidCondition, "analytic conditions need separate or batch");
  }
  if (c.edited && (c.examples != ExampleRegime::ThreeEx || c.call_strategy != CallStrategy::Separate)) {
    throw Error(ErrorCode::InvalidCondition, "edited requires analytic/separate/3ex");
  }
}

std::string format_condition(const RubricCondition& c) {
  std::string out{to_string(c.decomposition)};
  if (c.decomposition == Decomposition::Analytic) {
    out += '/';
    out += to_string(c.call_strategy);
  }
  out += '/';
  out += to_string(c.examples);
  if (c.edited) out += "/edited";
  return out;
}

RubricCondition parse_condition(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto slash = text.find('/', start);
    parts.push_back(text.substr(start, slash == std::string_view::npos ? slash : slash - start));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  auto bad = [&] {
    return Error(ErrorCode::InvalidCondition, fmt::format("malformed condition '{}'", text));
  };
  RubricCondition c;
  try {
    c.decomposition = parse_decomposition(parts[0]);
    std::size_t next = 1;
    if (c.decomposition == Decomposition::Analytic) {
      if (parts.size() < 3) throw bad();
      c.call_strategy = parse_call_strategy(parts[next++]);
    }
    if (parts.size() <= next) throw bad();
    c.examples = parse_example_regime(parts[next++]);
    if (next < parts.size()) {
      if (parts[next] != "edited" || next + 1 != parts.size()) throw bad();
      c.edited = true;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidCondition) throw;
    throw bad();
  }
  validate_condition(c);
  return c;
}

ScoreFamily family_of(RaterKind rater, Decomposition decomposition) {
  if (rater == RaterKind::Human) {
    return decomposition == Decomposition::Holistic ? ScoreFamily::HumanHolistic
                                                    : ScoreFamily::HumanAnalytic;
  }
  return decomposition == Decomposition::Holistic ? ScoreFamily::AutoraterHolistic
                                                  : ScoreFamily::AutoraterAnalytic;
}

const RatingRecord& validate_record(const RatingRecord& record, const ScoreScale& scale) {
  validate_condition(record.condition);
  if (!std::isfinite(record.value) || !scale.contains(record.value)) {
    throw Error(ErrorCode::OutOfRangeScore,
                fmt::format("item {} rater {}: value {} outside [{}, {}]", record.item_id,
                            record.rater_id, record.value, scale.min_score, scale.max_score));
  }
  bool overall = record.criterion == kOverall;
  bool holistic = record.condition.decomposition == Decomposition::Holistic;
  if (overall != holistic) {
    throw Error(ErrorCode::CriterionConditionMismatch,
                fmt::format("item {} rater {}: criterion '{}' under {}", record.item_id,
                            record.rater_id, record.criterion, format_condition(record.condition)));
  }
  if (record.distribution) {
    if (record.rater_kind != RaterKind::Autorater) {
      throw Error(ErrorCode::DistributionMismatch,
                  fmt::format("item {} rater {}: only autoraters carry score distributions",
                              record.item_id, record.rater_id));
    }
    double expected = weighted_score(*record.distribution, scale);
    if (std::abs(expected - record.value) > 1e-9) {
      throw Error(ErrorCode::DistributionMismatch,
                  fmt::format("item {} rater {}: stored value {} but distribution gives {}",
                              record.item_id, record.rater_id, record.value, expected));
    }
  }
  return record;
}

ComparisonKind classify_comparison(RaterRubricSide a, RaterRubricSide b) {
  bool rater_differs = a.rater_kind != b.rater_kind;
  bool rubric_differs = a.decomposition != b.decomposition;
  if (!rater_differs && !rubric_differs) {
    throw Error(ErrorCode::InvalidComparison, "both sides share rater kind and decomposition");
  }
  ComparisonVariant variant = rater_differs && rubric_differs ? ComparisonVariant::DeltaRaterRubric
                              : rater_differs                 ? ComparisonVariant::DeltaRater
                                                              : ComparisonVariant::DeltaRubric;
  return {variant, a, b};
}

void validate_comparison(const ComparisonKind& kind) {
  auto derived = classify_comparison(kind.side_a, kind.side_b);
  if (derived.variant != kind.variant) {
    throw Error(ErrorCode::InvalidComparison,
                fmt::format("sides describe {} but comparison is declared {}",
                            to_string(derived.variant), to_string(kind.variant)));
  }
}

std::string_view to_string(Domain domain) { return domain == Domain::AES ? "AES" : "IF"; }

std::string_view to_string(RaterKind kind) {
  return kind == RaterKind::Human ? "human" : "autorater";
}

std::string_view to_string(Decomposition decomposition) {
  return decomposition == Decomposition::Holistic ? "holistic" : "analytic";
}

std::string_view to_string(ExampleRegime examples) {
  switch (examples) {
    case ExampleRegime::Full: return "full";
    case ExampleRegime::ThreeEx: return "3ex";
    case ExampleRegime::ZeroEx: return "0ex";
  }
  return "?";
}

std::string_view to_string(CallStrategy strategy) {
  switch (strategy) {
    case CallStrategy::NotApplicable: return "na";
    case CallStrategy::Separate: return "separate";
    case CallStrategy::Batch: return "batch";
  }
  return "?";
}

std::string_view to_string(ComparisonVariant variant) {
  switch (variant) {
    case ComparisonVariant::DeltaRater: return "DeltaRater";
    case ComparisonVariant::DeltaRubric: return "DeltaRubric";
    case ComparisonVariant::DeltaRaterRubric: return "DeltaRaterRubric";
  }
  return "?";
}

std::string_view to_string(ScoreFamily family) {
  switch (family) {
    case ScoreFamily::HumanHolistic: return "H_H";
    case ScoreFamily::HumanAnalytic: return "H_A";
    case ScoreFamily::AutoraterHolistic: return "LLM_H";
    case ScoreFamily::AutoraterAnalytic: return "LLM_A";
  }
  return "?";
}

namespace {

[[noreturn]] void unknown(std::string_view what, std::string_view text) {
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown {} '{}'", what, text));
}

}  // namespace

Domain parse_domain(std::string_view text) {
  if (text == "AES" || text == "aes") return Domain::AES;
  if (text == "IF" || text == "if") return Domain::IF;
  unknown("domain", text);
}

RaterKind parse_rater_kind(std::string_view text) {
  if (text == "human") return RaterKind::Human;
  if (text == "autorater") return RaterKind::Autorater;
  unknown("rater kind", text);
}

Decomposition parse_decomposition(std::string_view text) {
  if (text == "holistic") return Decomposition::Holistic;
  if (text == "analytic") return Decomposition::Analytic;
  unknown("decomposition", text);
}

ExampleRegime parse_example_regime(std::string_view text) {
  if (text == "full") return ExampleRegime::Full;
  if (text == "3ex") return ExampleRegime::ThreeEx;
  if (text == "0ex") return ExampleRegime::ZeroEx;
  unknown("example regime", text);
}

CallStrategy parse_call_strategy(std::string_view text) {
  if (text == "separate") return CallStrategy::Separate;
  if (text == "batch") return CallStrategy::Batch;
  if (text == "na") return CallStrategy::NotApplicable;
  unknown("call strategy", text);
}

ComparisonVariant parse_comparison_variant(std::string_view text) {
  if (text == "DeltaRater") return ComparisonVariant::DeltaRater;
  if (text == "DeltaRubric") return ComparisonVariant::DeltaRubric;
  if (text == "DeltaRaterRubric") return ComparisonVariant::DeltaRaterRubric;
  unknown("comparison variant", text);
}

}  // namespace rubeval
