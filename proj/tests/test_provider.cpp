#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "rubeval/error.hpp"
#include "rubeval/provider.hpp"

using namespace rubeval;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir()
      : path_(fs::temp_directory_path() /
              (std::string("rubeval-provider-") + ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

class ScriptedProvider : public Provider {
 public:
  explicit ScriptedProvider(std::vector<TokenLogprob> tokens) : tokens_(std::move(tokens)) {}
  ProviderResponse send(const ProviderRequest& request) override {
    ++calls;
    return {prompt_hash(request.prompt), request.prompt, tokens_, {}, ""};
  }
  std::atomic<int> calls{0};

 private:
  std::vector<TokenLogprob> tokens_;
};

RubricBundle bundle() {
  RubricBundle b;
  b.scale = ScoreScale::integer(1, 6);
  b.criterion_order = {"ideas", "style"};
  b.rubric_texts = {{"ideas", "Ideas."}, {"style", "Style."}};
  return b;
}

}  // namespace

TEST(PromptHash, Sha256Hex) {
  EXPECT_EQ(prompt_hash("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ReplayProvider, HitAndMiss) {
  TempDir dir;
  ProviderResponse r{prompt_hash("hello"), "hello", {{"4", -0.2}, {"5", -1.9}}, {}, "4"};
  write_replay_record(dir.path(), r);
  ReplayProvider replay(dir.path());
  EXPECT_TRUE(replay.contains(r.prompt_hash));
  auto got = replay.send({"hello"});
  EXPECT_EQ(got.answer_tokens, r.answer_tokens);
  try {
    replay.send({"unseen"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ReplayMiss);
  }
}

TEST(ReplayProvider, MismatchedRecordIsProviderFailure) {
  TempDir dir;
  ProviderResponse r{prompt_hash("other"), "other", {{"4", -0.2}}, {}, ""};
  auto j = response_to_json(r);
  std::ofstream(dir.path() / (prompt_hash("hello") + ".json")) << j.dump();
  ReplayProvider replay(dir.path());
  try {
    replay.send({"hello"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ProviderFailure);
  }
}

TEST(Query, EmptyTokensIsProviderFailure) {
  ScriptedProvider p({});
  std::vector<ProviderRequest> req{{"a"}};
  try {
    query(p, req);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ProviderFailure);
  }
}

TEST(Query, PreservesRequestOrder) {
  ScriptedProvider p({{"3", -0.1}});
  std::vector<ProviderRequest> req;
  for (int i = 0; i < 50; ++i) req.push_back({"prompt " + std::to_string(i)});
  auto out = query(p, req, 8);
  ASSERT_EQ(out.size(), req.size());
  for (std::size_t i = 0; i < req.size(); ++i) EXPECT_EQ(out[i].prompt_text, req[i].prompt);
}

TEST(RateItem, SeparateGivesOneRecordPerCriterion) {
  ScriptedProvider p({{"4", std::log(0.5)}, {"2", std::log(0.5)}});
  auto recs = rate_item(p, RubricCondition::analytic(CallStrategy::Separate, ExampleRegime::ZeroEx), bundle(), "e1",
                        "Essay body.", "model");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(p.calls, 2);
  EXPECT_EQ(recs[0].criterion, "ideas");
  EXPECT_EQ(recs[1].criterion, "style");
  EXPECT_NEAR(recs[0].value, 3.0, 1e-12);
  EXPECT_EQ(recs[0].rater_kind, RaterKind::Autorater);
}

TEST(ResponseDistributions, BatchUsesAnswerPositions) {
  ProviderResponse r{"h", "p", {{"4", -0.1}}, {{{"4", -0.1}}, {{"2", -0.3}, {"3", -2.0}}}, ""};
  auto d = response_distributions(r, ScoreScale::integer(1, 6), 2);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[1].entries.front().first, 2);
  EXPECT_THROW(response_distributions(r, ScoreScale::integer(1, 6), 3), Error);
}
