#include <gtest/gtest.h>

#include <random>

#include "rubeval/error.hpp"
#include "rubeval/pipeline.hpp"

using namespace rubeval;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::IoError;
}

BootstrapInterval interval(double lo, double hi) {
  BootstrapInterval iv;
  iv.lo = lo;
  iv.hi = hi;
  classify_interval(iv);
  return iv;
}

TripleComparison triple(BootstrapInterval es, BootstrapInterval eb, BootstrapInterval sb) {
  return {"sep", "bat", "edi", {std::move(es), std::move(eb), std::move(sb)}};
}

const std::map<std::string, double> kTaus{{"sep", 0.4}, {"bat", 0.3}, {"edi", 0.6}, {"full", 0.5}, {"3ex", 0.45}};

nlohmann::json base_config() {
  return nlohmann::json::parse(R"({
    "domain": "AES",
    "datasets": [],
    "criteria": ["ideas", "style"],
    "seed": 42,
    "resamples": 200,
    "tables": [{
      "name": "t1", "kind": "DeltaRater",
      "columns": [
        {"label": "full", "a": {"rater": "human", "condition": "holistic/full"},
                          "b": {"rater": "autorater", "condition": "holistic/full"}},
        {"label": "3ex", "a": {"rater": "human", "condition": "holistic/full"},
                         "b": {"rater": "autorater", "condition": "holistic/3ex"}}
      ],
      "significance": [{"type": "pair", "columns": ["full", "3ex"]}]
    }]
  })");
}

std::vector<RatingRecord> synthetic_records(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(1.0, 6.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto clamp = [](double v) { return std::clamp(std::round(v), 1.0, 6.0); };
  std::vector<RatingRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string id = "e" + std::to_string(1000 + i);
    double t = u(rng);
    out.push_back({id, "h1", RaterKind::Human, RubricCondition::holistic(ExampleRegime::Full), "OVERALL",
                   clamp(t + 0.3 * noise(rng)), std::nullopt});
    out.push_back({id, "gpt", RaterKind::Autorater, RubricCondition::holistic(ExampleRegime::Full), "OVERALL",
                   clamp(t + 0.2 * noise(rng)), std::nullopt});
    out.push_back({id, "gpt", RaterKind::Autorater, RubricCondition::holistic(ExampleRegime::ThreeEx), "OVERALL",
                   clamp(t + 2.5 * noise(rng)), std::nullopt});
  }
  return out;
}

}  // namespace

TEST(RenderMarkers, AllSubsets) {
  const std::vector<Marker> all{Marker::Dagger, Marker::Star, Marker::SUp, Marker::SDown, Marker::BUp, Marker::BDown};
  int valid = 0;
  for (unsigned mask = 0; mask < 64; ++mask) {
    std::set<Marker> m;
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (mask & (1u << k)) m.insert(all[k]);
    }
    bool conflict = (m.contains(Marker::SUp) && m.contains(Marker::SDown)) ||
                    (m.contains(Marker::BUp) && m.contains(Marker::BDown));
    if (conflict) {
      EXPECT_EQ(code_of([&] { render_markers(m); }), ErrorCode::InvalidMarkerSet);
      continue;
    }
    ++valid;
    auto s = render_markers(m);
    EXPECT_EQ(render_markers(m), s);
    EXPECT_EQ(s.empty(), m.empty());
    EXPECT_EQ(s.find("†") != std::string::npos, m.contains(Marker::Dagger));
    EXPECT_EQ(s.find("★") != std::string::npos, m.contains(Marker::Star));
    bool s_marked = m.contains(Marker::SUp) || m.contains(Marker::SDown);
    EXPECT_EQ(s.find('s') != std::string::npos, s_marked);
  }
  EXPECT_EQ(valid, 36);
}

TEST(RenderMarkers, CombinedArrows) {
  EXPECT_EQ(render_markers({Marker::SUp, Marker::BUp}), "s,b↑");
  EXPECT_EQ(render_markers({Marker::SDown, Marker::BDown}), "s,b↓");
  EXPECT_EQ(render_markers({Marker::SUp, Marker::BDown}), "s↑,b↓");
  EXPECT_EQ(render_markers({Marker::Star, Marker::BUp}), "★,b↑");
  EXPECT_EQ(render_markers({}), "");
}

TEST(AnnotateSignificance, EditedAboveBoth) {
  std::vector<TripleComparison> t{triple(interval(0.05, 0.3), interval(0.1, 0.4), interval(-0.1, 0.2))};
  auto cells = annotate_significance(kTaus, {}, t);
  EXPECT_EQ(cells["edi"].markers, (std::set<Marker>{Marker::SUp, Marker::BUp}));
  EXPECT_EQ(render_markers(cells["edi"].markers), "s,b↑");
  EXPECT_TRUE(cells["sep"].markers.empty());
}

TEST(AnnotateSignificance, NothingSignificant) {
  std::vector<TripleComparison> t{triple(interval(-0.1, 0.3), interval(-0.1, 0.4), interval(-0.1, 0.2))};
  std::vector<PairComparison> p{{"full", "3ex", interval(-0.2, 0.1)}};
  for (const auto& [label, cell] : annotate_significance(kTaus, p, t)) EXPECT_TRUE(cell.markers.empty()) << label;
}

TEST(AnnotateSignificance, StarAndDaggerOnLargerSide) {
  std::vector<TripleComparison> t{triple(interval(-0.4, -0.1), interval(-0.1, 0.4), interval(0.02, 0.2))};
  std::vector<PairComparison> p{{"full", "3ex", interval(-0.3, -0.01)}};
  auto cells = annotate_significance(kTaus, p, t);
  EXPECT_EQ(cells["sep"].markers, std::set<Marker>{Marker::Star});
  EXPECT_EQ(cells["edi"].markers, std::set<Marker>{Marker::SDown});
  EXPECT_EQ(cells["3ex"].markers, std::set<Marker>{Marker::Dagger});
  EXPECT_TRUE(cells["full"].markers.empty());
}

TEST(AnnotateSignificance, MissingComparison) {
  std::vector<PairComparison> p{{"full", "nowhere", interval(0.1, 0.2)}};
  EXPECT_EQ(code_of([&] { annotate_significance(kTaus, p, {}); }), ErrorCode::MissingComparison);
}

TEST(ParseConfig, Errors) {
  auto j = base_config();
  j.erase("seed");
  EXPECT_EQ(code_of([&] { parse_config(j, "."); }), ErrorCode::ConfigError);

  j = base_config();
  j["tables"][0]["kind"] = "DeltaRubric";
  EXPECT_EQ(code_of([&] { parse_config(j, "."); }), ErrorCode::InvalidComparison);

  j = base_config();
  j["tables"][0]["significance"][0]["columns"] = {"full", "zzz"};
  EXPECT_EQ(code_of([&] { parse_config(j, "."); }), ErrorCode::ConfigError);

  j = base_config();
  j["tables"][0]["columns"][0]["b"]["condition"] = "analytic/batch/3ex/edited";
  EXPECT_TRUE(is_config_error(code_of([&] { parse_config(j, "."); })));

  j = base_config();
  j["consolidation"] = {{"human_holistic", "median"}};
  EXPECT_EQ(code_of([&] { parse_config(j, "."); }), ErrorCode::ConfigError);
}

TEST(ParseConfig, ResolvesDatasetsAndPolicies) {
  auto j = base_config();
  j["datasets"] = {"records.jsonl"};
  j["consolidation"] = {{"human_holistic", {{"policy", "single"}, {"rater", "h2"}}}};
  auto c = parse_config(j, "/data/run");
  EXPECT_EQ(c.datasets.at(0), std::filesystem::path("/data/run/records.jsonl"));
  EXPECT_EQ(c.consolidation.at(ScoreFamily::HumanHolistic), ConsolidationPolicy::single("h2"));
  EXPECT_EQ(c.seed, 42u);
}

TEST(RunExperiment, AbsentConditionNamesIt) {
  auto j = base_config();
  j["tables"][0]["columns"][1]["b"]["condition"] = "holistic/0ex";
  j["tables"][0]["significance"] = nlohmann::json::array();
  auto c = parse_config(j, ".");
  try {
    run_experiment(c, synthetic_records(1, 30));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingCondition);
    EXPECT_TRUE(is_config_error(e.code()));
    EXPECT_NE(std::string(e.what()).find("holistic/0ex"), std::string::npos);
  }
}

TEST(RunExperiment, DaggerOnStrongerCondition) {
  auto c = parse_config(base_config(), ".");
  c.n_resamples = 1000;
  auto r = run_experiment(c, synthetic_records(2, 120));
  EXPECT_NE(r.markdown.find("^†"), std::string::npos) << r.markdown;
  EXPECT_EQ(r.csv.substr(0, r.csv.find('\n')),
            "subset,subset_size,table,row,column,side_a,side_b,n_items,tau,concordant,discordant,ties_x,ties_y,"
            "ties_both,markers,status");
  auto j = nlohmann::json::parse(r.intervals_json);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["direction"], "AFavored");
  EXPECT_EQ(j[0]["n_items"], 120);
}

TEST(RunExperiment, ThreadCountDoesNotChangeOutput) {
  auto c = parse_config(base_config(), ".");
  auto records = synthetic_records(3, 80);
  c.threads = 1;
  auto one = run_experiment(c, records);
  for (unsigned t : {4u, 8u}) {
    c.threads = t;
    auto many = run_experiment(c, records);
    EXPECT_EQ(many.csv, one.csv);
    EXPECT_EQ(many.intervals_json, one.intervals_json);
    EXPECT_EQ(many.markdown, one.markdown);
  }
}

TEST(RunExperiment, StratifiesByHumanAgreement) {
  auto j = base_config();
  j["stratify"] = {{"rater", "human"}, {"condition", "holistic/full"}};
  auto c = parse_config(j, ".");
  auto records = synthetic_records(4, 60);
  std::mt19937_64 rng(4);
  for (std::size_t i = 0; i < 60; ++i) {
    const auto& first = records[3 * i];
    double v = (i % 3 == 0) ? first.value : std::clamp(first.value + (rng() % 2 ? 1.0 : -1.0), 1.0, 6.0);
    if (v == first.value && i % 3 != 0) v = first.value == 1.0 ? 2.0 : first.value - 1.0;
    records.push_back({first.item_id, "h2", RaterKind::Human, first.condition, "OVERALL", v, std::nullopt});
  }
  auto r = run_experiment(c, records);
  EXPECT_NE(r.markdown.find("## Subset agree (20 items)"), std::string::npos) << r.markdown;
  EXPECT_NE(r.markdown.find("## Subset disagree (40 items)"), std::string::npos);
}
