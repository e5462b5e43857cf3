#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "rubeval/error.hpp"
#include "rubeval/records_io.hpp"

using namespace rubeval;
namespace fs = std::filesystem;

namespace {

fs::path write_file(const std::string& name, const std::string& body) {
  auto p = fs::temp_directory_path() / ("rubeval-records-" + name);
  std::ofstream(p) << body;
  return p;
}

const ScaleManifest kScales{};

}  // namespace

TEST(Ingest, ReadsLinesAndSkipsBlanks) {
  auto p = write_file("ok.jsonl",
                      R"({"schema_version":1,"item_id":"e1","rater_id":"h1","rater_kind":"human","domain":"AES","condition":"holistic/full","criterion":"OVERALL","value":4})"
                      "\n\n"
                      R"({"schema_version":1,"item_id":"e1","rater_id":"gpt","rater_kind":"autorater","domain":"AES","condition":{"decomposition":"analytic","examples":"0ex","call_strategy":"batch","edited":false},"criterion":"ideas","answer_tokens":[["4",-0.5108256237659907],["2",-0.916290731874155]]})"
                      "\n");
  auto recs = ingest(p, Domain::AES, kScales);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].value, 4.0);
  EXPECT_NEAR(recs[1].value, 0.6 * 4 + 0.4 * 2, 1e-9);
  EXPECT_TRUE(recs[1].distribution.has_value());
  fs::remove(p);
}

TEST(Ingest, EditedBatchIsRejectedAsSchemaViolation) {
  auto p = write_file("edited.jsonl",
                      R"({"schema_version":1,"item_id":"e1","rater_id":"gpt","rater_kind":"autorater","domain":"AES","condition":"analytic/batch/3ex/edited","criterion":"ideas","value":3})"
                      "\n");
  try {
    ingest(p, Domain::AES, kScales);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaVersionMismatch);
    EXPECT_NE(std::string(e.what()).find(":1"), std::string::npos);
  }
  fs::remove(p);
}

TEST(Ingest, WrongSchemaVersion) {
  auto p = write_file("v2.jsonl",
                      R"({"schema_version":2,"item_id":"e1","rater_id":"h1","rater_kind":"human","domain":"AES","condition":"holistic/full","criterion":"OVERALL","value":4})"
                      "\n");
  EXPECT_THROW(ingest(p, Domain::AES, kScales), Error);
  fs::remove(p);
}

TEST(Ingest, DuplicateRecord) {
  std::string line =
      R"({"schema_version":1,"item_id":"e1","rater_id":"h1","rater_kind":"human","domain":"AES","condition":"holistic/full","criterion":"OVERALL","value":4})";
  auto p = write_file("dup.jsonl", line + "\n" + line + "\n");
  try {
    ingest(p, Domain::AES, kScales);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateRecord);
  }
  fs::remove(p);
}

TEST(Ingest, MalformedJsonReportsLine) {
  std::string good =
      R"({"schema_version":1,"item_id":"e1","rater_id":"h1","rater_kind":"human","domain":"AES","condition":"holistic/full","criterion":"OVERALL","value":4})";
  auto p = write_file("bad.jsonl", good + "\n{not json\n");
  try {
    ingest(p, Domain::AES, kScales);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("bad.jsonl:2"), std::string::npos) << e.what();
  }
  fs::remove(p);
}

TEST(Ingest, UnknownRaterKindIsParseError) {
  auto p = write_file("kind.jsonl",
                      R"({"schema_version":1,"item_id":"e1","rater_id":"h1","rater_kind":"robot","domain":"AES","condition":"holistic/full","criterion":"OVERALL","value":4})"
                      "\n");
  try {
    ingest(p, Domain::AES, kScales);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
  fs::remove(p);
}

TEST(WriteRecords, RoundTripsThroughIngest) {
  std::vector<RatingRecord> recs{
      {"e1", "h1", RaterKind::Human, RubricCondition::holistic(ExampleRegime::Full), "OVERALL", 5, std::nullopt},
      {"e2", "gpt", RaterKind::Autorater, RubricCondition::edited_analytic(), "ideas", 4.0,
       ScoreDistribution{{{4, 0.0}}}},
  };
  auto p = fs::temp_directory_path() / "rubeval-records-roundtrip.jsonl";
  write_records(p, recs, Domain::AES, kScales);
  EXPECT_EQ(ingest(p, Domain::AES, kScales), recs);
  fs::remove(p);
}
