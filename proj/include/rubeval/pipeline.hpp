#pragma once

// Experiment orchestration: ingest records, compute agreement per table
// cell, bootstrap the configured significance groups and render the report.
//
// Preference wiring per cell:
//   * holistic sides and per-criterion analytic rows compare scalars;
//   * AES analytic sides facing a holistic side are aggregated by Pareto
//     dominance over the manifest criteria (row "pareto");
//   * IF analytic sides are reduced to their instruction-following ratio
//     (row "ratio").

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rubeval/aggregation.hpp"
#include "rubeval/inference.hpp"
#include "rubeval/model.hpp"
#include "rubeval/records_io.hpp"

namespace rubeval {

enum class Marker { Dagger, Star, SUp, SDown, BUp, BDown };

struct ReportCell {
  double tau = 0.0;
  std::set<Marker> markers;
};

/// "†", "★" and the edited-column arrows ("s,b↑", "s↑,b↓", ...), comma
/// separated. Throws InvalidMarkerSet if both arrows of s or of b are set.
std::string render_markers(const std::set<Marker>& markers);

/// Two columns tested against each other; diff = tau(column_a) - tau(column_b).
struct PairComparison {
  std::string column_a;
  std::string column_b;
  BootstrapInterval interval;
};

struct TripleComparison {
  std::string separate;
  std::string batch;
  std::string edited;
  TripleIntervals intervals;
};

/// Dagger on the larger member of a significant pair, Star on the larger of a
/// significant separate/batch difference, s/b arrows on the edited column.
std::map<std::string, ReportCell> annotate_significance(const std::map<std::string, double>& taus,
                                                        std::span<const PairComparison> pairs,
                                                        std::span<const TripleComparison> triples);

struct SourceSpec {
  RaterKind rater_kind = RaterKind::Human;
  RubricCondition condition;
  std::vector<std::string> rater_ids;  // empty: every rater
};

struct ColumnSpec {
  std::string label;
  SourceSpec a;
  SourceSpec b;
};

struct GroupSpec {
  enum class Type { Pair, Triple } type = Type::Pair;
  std::vector<std::string> columns;  // pair: {a, b}; triple: {separate, batch, edited}
};

struct TableSpec {
  std::string name;
  std::string title;
  ComparisonVariant variant = ComparisonVariant::DeltaRater;
  std::vector<ColumnSpec> columns;
  std::vector<GroupSpec> groups;
};

struct ExperimentConfig {
  std::string title = "Agreement report";
  Domain domain = Domain::AES;
  std::vector<std::filesystem::path> datasets;
  ScaleManifest scales;
  std::vector<Criterion> criteria;
  std::map<ScoreFamily, ConsolidationPolicy> consolidation;
  double tie_epsilon = 0.0;
  std::size_t n_resamples = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<SourceSpec> stratify_on;
  std::vector<TableSpec> tables;
};

/// Parses and checks a JSON config. Dataset paths are resolved against
/// `base_dir`. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

ScoreScale scale_from_json(const nlohmann::json& j);
ConsolidationPolicy policy_from_json(const nlohmann::json& j);

struct Report {
  std::string csv;
  std::string intervals_json;
  std::string markdown;
};

Report run_experiment(const ExperimentConfig& config);
Report run_experiment(const ExperimentConfig& config, const std::vector<RatingRecord>& records);

/// Writes report.csv, intervals.json and report.md into `dir`. Files are
/// staged under temporary names and renamed only once all three are written.
void write_report(const Report& report, const std::filesystem::path& dir);

}  // namespace rubeval
