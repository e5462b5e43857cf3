#include <gtest/gtest.h>

#include <random>

#include "rubeval/error.hpp"
#include "rubeval/model.hpp"
#include "rubeval/records_io.hpp"
#include "rubeval/scoring.hpp"

using namespace rubeval;

namespace {

RatingRecord human_holistic(double value) {
  return {"e1", "h1", RaterKind::Human, RubricCondition::holistic(ExampleRegime::Full), std::string(kOverall),
          value, std::nullopt};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::IoError;
}

}  // namespace

TEST(ScoreScale, RejectsInvertedAndNonBinary) {
  EXPECT_EQ(code_of([] { ScoreScale::integer(3, 3); }), ErrorCode::InvalidScale);
  EXPECT_EQ(code_of([] { validate_scale({0, 2, ScaleKind::BinaryYesNo}); }), ErrorCode::InvalidScale);
  EXPECT_NO_THROW(validate_scale(ScoreScale::binary()));
}

TEST(RubricCondition, Invariants) {
  EXPECT_EQ(code_of([] { validate_condition({Decomposition::Holistic, ExampleRegime::Full, CallStrategy::Batch, false}); }),
            ErrorCode::InvalidCondition);
  EXPECT_EQ(code_of([] { validate_condition({Decomposition::Analytic, ExampleRegime::ThreeEx, CallStrategy::Batch, true}); }),
            ErrorCode::InvalidCondition);
  EXPECT_EQ(code_of([] { validate_condition({Decomposition::Analytic, ExampleRegime::ZeroEx, CallStrategy::Separate, true}); }),
            ErrorCode::InvalidCondition);
  EXPECT_NO_THROW(validate_condition(RubricCondition::edited_analytic()));
}

TEST(RubricCondition, CompactFormRoundTrips) {
  std::vector<RubricCondition> all;
  for (auto ex : {ExampleRegime::Full, ExampleRegime::ThreeEx, ExampleRegime::ZeroEx}) {
    all.push_back(RubricCondition::holistic(ex));
    all.push_back(RubricCondition::analytic(CallStrategy::Separate, ex));
    all.push_back(RubricCondition::analytic(CallStrategy::Batch, ex));
  }
  all.push_back(RubricCondition::edited_analytic());
  for (const auto& c : all) EXPECT_EQ(parse_condition(format_condition(c)), c) << format_condition(c);

  EXPECT_EQ(format_condition(RubricCondition::edited_analytic()), "analytic/separate/3ex/edited");
  EXPECT_EQ(code_of([] { parse_condition("analytic/batch/3ex/edited"); }), ErrorCode::InvalidCondition);
  EXPECT_EQ(code_of([] { parse_condition("holistic"); }), ErrorCode::InvalidCondition);
  EXPECT_EQ(code_of([] { parse_condition("analytic/sideways/0ex"); }), ErrorCode::InvalidCondition);
}

TEST(ValidateRecord, AcceptsInRangeHolistic) {
  auto r = human_holistic(4);
  EXPECT_EQ(validate_record(r, ScoreScale::integer(1, 6)), r);
}

TEST(ValidateRecord, RejectsOutOfRange) {
  EXPECT_EQ(code_of([] { validate_record(human_holistic(7), ScoreScale::integer(1, 6)); }),
            ErrorCode::OutOfRangeScore);
}

TEST(ValidateRecord, RejectsOverallUnderAnalytic) {
  auto r = human_holistic(4);
  r.condition = RubricCondition::analytic(CallStrategy::Separate, ExampleRegime::ZeroEx);
  EXPECT_EQ(code_of([&] { validate_record(r, ScoreScale::integer(1, 6)); }), ErrorCode::CriterionConditionMismatch);

  auto h = human_holistic(4);
  h.criterion = "ideas";
  EXPECT_EQ(code_of([&] { validate_record(h, ScoreScale::integer(1, 6)); }), ErrorCode::CriterionConditionMismatch);
}

TEST(ValidateRecord, DistributionMustMatchValue) {
  RatingRecord r = human_holistic(3.6);
  r.rater_kind = RaterKind::Autorater;
  r.distribution = ScoreDistribution{{{1, std::log(0.2)}, {4, std::log(0.6)}, {5, std::log(0.2)}}};
  EXPECT_NO_THROW(validate_record(r, ScoreScale::integer(1, 6)));
  r.value = 3.5;
  EXPECT_EQ(code_of([&] { validate_record(r, ScoreScale::integer(1, 6)); }), ErrorCode::DistributionMismatch);
  r.value = 3.6;
  r.rater_kind = RaterKind::Human;
  EXPECT_EQ(code_of([&] { validate_record(r, ScoreScale::integer(1, 6)); }), ErrorCode::DistributionMismatch);
}

TEST(ComparisonKind, ClassifiesVariants) {
  RaterRubricSide hh{RaterKind::Human, Decomposition::Holistic};
  RaterRubricSide ha{RaterKind::Human, Decomposition::Analytic};
  RaterRubricSide lh{RaterKind::Autorater, Decomposition::Holistic};
  RaterRubricSide la{RaterKind::Autorater, Decomposition::Analytic};
  EXPECT_EQ(classify_comparison(hh, lh).variant, ComparisonVariant::DeltaRater);
  EXPECT_EQ(classify_comparison(ha, la).variant, ComparisonVariant::DeltaRater);
  EXPECT_EQ(classify_comparison(hh, ha).variant, ComparisonVariant::DeltaRubric);
  EXPECT_EQ(classify_comparison(lh, la).variant, ComparisonVariant::DeltaRubric);
  EXPECT_EQ(classify_comparison(hh, la).variant, ComparisonVariant::DeltaRaterRubric);
  EXPECT_EQ(classify_comparison(lh, ha).variant, ComparisonVariant::DeltaRaterRubric);
  EXPECT_EQ(code_of([&] { classify_comparison(hh, hh); }), ErrorCode::InvalidComparison);
  EXPECT_EQ(code_of([&] { validate_comparison({ComparisonVariant::DeltaRubric, hh, lh}); }),
            ErrorCode::InvalidComparison);
}

TEST(ScoreFamily, EveryRecordInExactlyOneFamily) {
  std::set<ScoreFamily> seen;
  for (auto rater : {RaterKind::Human, RaterKind::Autorater}) {
    for (auto dec : {Decomposition::Holistic, Decomposition::Analytic}) seen.insert(family_of(rater, dec));
  }
  EXPECT_EQ(seen.size(), 4u);
  EXPECT_EQ(to_string(family_of(RaterKind::Autorater, Decomposition::Analytic)), "LLM_A");
}

// Serializing and re-parsing any valid record yields an identical record.
TEST(RatingRecord, JsonRoundTripProperty) {
  std::mt19937_64 rng(11);
  ScaleManifest scales{ScoreScale::integer(1, 6), ScoreScale::integer(1, 6)};
  std::uniform_real_distribution<double> lp(-8.0, 0.0);
  std::vector<RubricCondition> conds{RubricCondition::holistic(ExampleRegime::Full),
                                     RubricCondition::holistic(ExampleRegime::ThreeEx),
                                     RubricCondition::analytic(CallStrategy::Batch, ExampleRegime::ZeroEx),
                                     RubricCondition::edited_analytic()};
  for (int trial = 0; trial < 300; ++trial) {
    RatingRecord r;
    r.item_id = "item-" + std::to_string(rng() % 1000);
    r.rater_id = trial % 2 ? "gpt" : "h1";
    r.rater_kind = trial % 2 ? RaterKind::Autorater : RaterKind::Human;
    r.condition = conds[rng() % conds.size()];
    r.criterion = r.condition.decomposition == Decomposition::Holistic ? std::string(kOverall) : "ideas";
    if (r.rater_kind == RaterKind::Autorater) {
      ScoreDistribution d;
      for (int s = 1; s <= 6; ++s) {
        if (rng() % 2) d.entries.emplace_back(s, lp(rng));
      }
      if (d.entries.empty()) d.entries.emplace_back(3, -0.5);
      r.distribution = d;
      r.value = weighted_score(d, scales.holistic);
    } else {
      r.value = 1 + static_cast<double>(rng() % 6);
    }
    auto j = nlohmann::json::parse(record_to_json(r, Domain::AES, scales).dump());
    EXPECT_EQ(record_from_json(j, Domain::AES, scales), r);
  }
}
