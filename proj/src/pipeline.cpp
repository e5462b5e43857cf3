#include "rubeval/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "rubeval/concordance.hpp"
#include "rubeval/error.hpp"
#include "rubeval/random.hpp"
#include "rubeval/stratify.hpp"

namespace rubeval {

// ---------------------------------------------------------------------------
// Significance markers

std::string render_markers(const std::set<Marker>& m) {
  auto has = [&](Marker k) { return m.contains(k); };
  if ((has(Marker::SUp) && has(Marker::SDown)) || (has(Marker::BUp) && has(Marker::BDown))) {
    throw Error(ErrorCode::InvalidMarkerSet, "a comparison cannot be both larger and smaller");
  }
  std::vector<std::string> parts;
  if (has(Marker::Dagger)) parts.emplace_back("†");
  if (has(Marker::Star)) parts.emplace_back("★");

  std::optional<bool> s_up, b_up;
  if (has(Marker::SUp)) s_up = true;
  if (has(Marker::SDown)) s_up = false;
  if (has(Marker::BUp)) b_up = true;
  if (has(Marker::BDown)) b_up = false;
  auto arrow = [](bool up) { return up ? "↑" : "↓"; };
  if (s_up && b_up && *s_up == *b_up) {
    parts.push_back(fmt::format("s,b{}", arrow(*s_up)));
  } else {
    if (s_up) parts.push_back(fmt::format("s{}", arrow(*s_up)));
    if (b_up) parts.push_back(fmt::format("b{}", arrow(*b_up)));
  }

  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ',';
    out += parts[i];
  }
  return out;
}

std::map<std::string, ReportCell> annotate_significance(const std::map<std::string, double>& taus,
                                                        std::span<const PairComparison> pairs,
                                                        std::span<const TripleComparison> triples) {
  std::map<std::string, ReportCell> cells;
  for (const auto& [label, tau] : taus) cells[label].tau = tau;

  auto cell = [&](const std::string& label) -> ReportCell& {
    auto it = cells.find(label);
    if (it == cells.end()) {
      throw Error(ErrorCode::MissingComparison, fmt::format("no tau for column '{}'", label));
    }
    return it->second;
  };
  auto larger = [&](const BootstrapInterval& iv, const std::string& a, const std::string& b,
                    Marker marker) {
    if (!iv.significant) return;
    cell(iv.direction == Direction::AFavored ? a : b).markers.insert(marker);
  };

  for (const auto& p : pairs) {
    cell(p.column_a);
    cell(p.column_b);
    larger(p.interval, p.column_a, p.column_b, Marker::Dagger);
  }
  for (const auto& t : triples) {
    cell(t.separate);
    cell(t.batch);
    auto& edited = cell(t.edited);
    larger(t.intervals.separate_vs_batch, t.separate, t.batch, Marker::Star);
    const auto& es = t.intervals.edited_vs_separate;
    const auto& eb = t.intervals.edited_vs_batch;
    if (es.significant) edited.markers.insert(es.direction == Direction::AFavored ? Marker::SUp : Marker::SDown);
    if (eb.significant) edited.markers.insert(eb.direction == Direction::AFavored ? Marker::BUp : Marker::BDown);
  }
  return cells;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

SourceSpec source_from_json(const nlohmann::json& j) {
  SourceSpec s;
  s.rater_kind = parse_rater_kind(j.at("rater").get<std::string>());
  s.condition = parse_condition(j.at("condition").get<std::string>());
  if (j.contains("rater_ids")) s.rater_ids = j.at("rater_ids").get<std::vector<std::string>>();
  return s;
}

RaterRubricSide side_of(const SourceSpec& s) { return {s.rater_kind, s.condition.decomposition}; }

std::string describe(const SourceSpec& s) {
  return fmt::format("{}:{}", to_string(s.rater_kind), format_condition(s.condition));
}

}  // namespace

ScoreScale scale_from_json(const nlohmann::json& j) {
  if (j.value("kind", std::string("integer")) == "binary") return ScoreScale::binary();
  return ScoreScale::integer(j.at("min").get<int>(), j.at("max").get<int>());
}

ConsolidationPolicy policy_from_json(const nlohmann::json& j) {
  std::string name = j.is_string() ? j.get<std::string>() : j.at("policy").get<std::string>();
  if (name == "average") return ConsolidationPolicy::average();
  if (name == "majority") return ConsolidationPolicy::majority();
  if (name == "single") return ConsolidationPolicy::single(j.at("rater").get<std::string>());
  throw Error(ErrorCode::ConfigError, fmt::format("unknown consolidation policy '{}'", name));
}

ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  try {
    c.title = j.value("title", c.title);
    c.domain = parse_domain(j.at("domain").get<std::string>());
    for (const auto& d : j.at("datasets")) {
      std::filesystem::path p = d.get<std::string>();
      c.datasets.push_back(p.is_absolute() ? p : base_dir / p);
    }
    if (j.contains("scales")) {
      const auto& s = j.at("scales");
      c.scales.holistic = scale_from_json(s.at("holistic"));
      c.scales.analytic = scale_from_json(s.at("analytic"));
    }
    c.criteria = j.value("criteria", std::vector<std::string>{});
    for (auto family : {ScoreFamily::HumanHolistic, ScoreFamily::HumanAnalytic, ScoreFamily::AutoraterHolistic,
                        ScoreFamily::AutoraterAnalytic}) {
      c.consolidation[family] = ConsolidationPolicy::average();
    }
    if (j.contains("consolidation")) {
      static const std::map<std::string, ScoreFamily> keys{{"human_holistic", ScoreFamily::HumanHolistic},
                                                           {"human_analytic", ScoreFamily::HumanAnalytic},
                                                           {"autorater_holistic", ScoreFamily::AutoraterHolistic},
                                                           {"autorater_analytic", ScoreFamily::AutoraterAnalytic}};
      for (const auto& [key, value] : j.at("consolidation").items()) {
        auto it = keys.find(key);
        if (it == keys.end()) config_error(fmt::format("unknown score family '{}'", key));
        c.consolidation[it->second] = policy_from_json(value);
      }
    }
    c.tie_epsilon = j.value("tie_epsilon", 0.0);
    if (!(c.tie_epsilon >= 0.0)) config_error("tie_epsilon must be >= 0");
    c.n_resamples = j.value("resamples", std::size_t{1000});
    if (c.n_resamples == 0) config_error("resamples must be positive");
    if (!j.contains("seed")) config_error("seed is required");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.threads = j.value("threads", 1u);
    if (j.contains("stratify") && !j.at("stratify").is_null()) c.stratify_on = source_from_json(j.at("stratify"));

    for (const auto& tj : j.at("tables")) {
      TableSpec t;
      t.name = tj.at("name").get<std::string>();
      t.title = tj.value("title", t.name);
      t.variant = parse_comparison_variant(tj.at("kind").get<std::string>());
      std::set<std::string> labels;
      for (const auto& cj : tj.at("columns")) {
        ColumnSpec col;
        col.label = cj.at("label").get<std::string>();
        col.a = source_from_json(cj.at("a"));
        col.b = source_from_json(cj.at("b"));
        if (!labels.insert(col.label).second) config_error(fmt::format("duplicate column '{}'", col.label));
        try {
          validate_comparison({t.variant, side_of(col.a), side_of(col.b)});
        } catch (const Error& e) {
          throw Error(ErrorCode::InvalidComparison,
                      fmt::format("table {} column {}: {}", t.name, col.label, e.detail()));
        }
        if (c.domain == Domain::AES && col.a.condition.decomposition == Decomposition::Analytic &&
            c.criteria.empty()) {
          config_error("analytic AES columns need a criterion manifest");
        }
        t.columns.push_back(std::move(col));
      }
      for (const auto& gj : tj.value("significance", nlohmann::json::array())) {
        GroupSpec g;
        auto type = gj.at("type").get<std::string>();
        if (type == "pair") {
          g.type = GroupSpec::Type::Pair;
          g.columns = gj.at("columns").get<std::vector<std::string>>();
          if (g.columns.size() != 2 || g.columns[0] == g.columns[1]) {
            config_error("a pair group names two distinct columns");
          }
        } else if (type == "triple") {
          g.type = GroupSpec::Type::Triple;
          g.columns = {gj.at("separate").get<std::string>(), gj.at("batch").get<std::string>(),
                       gj.at("edited").get<std::string>()};
        } else {
          config_error(fmt::format("unknown significance group '{}'", type));
        }
        for (const auto& label : g.columns) {
          if (!labels.contains(label)) config_error(fmt::format("group references unknown column '{}'", label));
        }
        t.groups.push_back(std::move(g));
      }
      c.tables.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    config_error(e.what());
  } catch (const Error& e) {
    if (is_config_error(e.code())) throw;
    config_error(e.detail());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error(fmt::format("cannot open config {}", path.string()));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    config_error(fmt::format("{}: {}", path.string(), e.what()));
  }
  return parse_config(j, path.parent_path());
}

// ---------------------------------------------------------------------------
// Experiment

namespace {

using RaterScores = std::map<std::string, double>;
using ItemScores = std::map<std::string, RaterScores>;
using SourceKey = std::pair<RaterKind, RubricCondition>;

struct RecordIndex {
  std::map<SourceKey, std::map<Criterion, ItemScores>> by_source;

  explicit RecordIndex(const std::vector<RatingRecord>& records) {
    for (const auto& r : records) {
      by_source[{r.rater_kind, r.condition}][r.criterion][r.item_id][r.rater_id] = r.value;
    }
  }

  const std::map<Criterion, ItemScores>* find(const SourceSpec& s) const {
    auto it = by_source.find({s.rater_kind, s.condition});
    return it == by_source.end() ? nullptr : &it->second;
  }
};

enum class RowKind { Overall, Criterion, Pareto, Ratio };

struct Row {
  std::string label;
  RowKind kind;

  friend bool operator==(const Row&, const Row&) = default;
};

std::vector<Row> rows_for(const ColumnSpec& col, const ExperimentConfig& config) {
  bool a_holistic = col.a.condition.decomposition == Decomposition::Holistic;
  bool b_holistic = col.b.condition.decomposition == Decomposition::Holistic;
  if (a_holistic && b_holistic) return {{std::string(kOverall), RowKind::Overall}};
  if (config.domain == Domain::IF) return {{"ratio", RowKind::Ratio}};
  if (a_holistic || b_holistic) return {{"pareto", RowKind::Pareto}};
  std::vector<Row> rows;
  for (const auto& c : config.criteria) rows.push_back({c, RowKind::Criterion});
  return rows;
}

// Per-item measurement of one side: a single scalar, or a criterion vector
// for Pareto rows.
using Measure = std::vector<double>;

class SideReader {
 public:
  SideReader(const RecordIndex& index, const SourceSpec& spec, const ExperimentConfig& config)
      : data_(index.find(spec)),
        spec_(spec),
        config_(config),
        policy_(config.consolidation.at(family_of(spec.rater_kind, spec.condition.decomposition))) {}

  std::optional<Measure> measure(const Row& row, const std::string& item) const {
    if (spec_.condition.decomposition == Decomposition::Holistic) {
      auto v = consolidated(std::string(kOverall), item);
      if (!v) return std::nullopt;
      return Measure{*v};
    }
    switch (row.kind) {
      case RowKind::Overall:
        return std::nullopt;
      case RowKind::Criterion: {
        auto v = consolidated(row.label, item);
        if (!v) return std::nullopt;
        return Measure{*v};
      }
      case RowKind::Pareto: {
        Measure m;
        for (const auto& c : config_.criteria) {
          auto v = consolidated(c, item);
          if (!v) return std::nullopt;
          m.push_back(*v);
        }
        return m;
      }
      case RowKind::Ratio: {
        std::vector<double> answers;
        for (const auto& [criterion, items] : *data_) {
          if (!items.contains(item)) continue;
          auto v = consolidated(criterion, item);
          if (v) answers.push_back(*v);
        }
        if (answers.empty()) return std::nullopt;
        return Measure{follow_ratio(answers)};
      }
    }
    return std::nullopt;
  }

  bool vector_valued(const Row& row) const {
    return row.kind == RowKind::Pareto && spec_.condition.decomposition == Decomposition::Analytic;
  }

 private:
  std::optional<double> consolidated(const Criterion& criterion, const std::string& item) const {
    auto c = data_->find(criterion);
    if (c == data_->end()) return std::nullopt;
    auto i = c->second.find(item);
    if (i == c->second.end()) return std::nullopt;
    RaterScores scores;
    for (const auto& [rater, v] : i->second) {
      if (spec_.rater_ids.empty() ||
          std::find(spec_.rater_ids.begin(), spec_.rater_ids.end(), rater) != spec_.rater_ids.end()) {
        scores.emplace(rater, v);
      }
    }
    if (scores.empty()) return std::nullopt;
    try {
      return consolidate(scores, policy_);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("{} item {} criterion {}: {}", describe(spec_), item, criterion, e.detail()));
    }
  }

  const std::map<Criterion, ItemScores>* data_;
  const SourceSpec& spec_;
  const ExperimentConfig& config_;
  ConsolidationPolicy policy_;
};

struct ColumnData {
  std::vector<std::string> items;
  std::vector<Measure> a;
  std::vector<Measure> b;
  bool a_vector = false;
  bool b_vector = false;
};

ColumnData column_data(const ColumnSpec& col, const Row& row, const std::vector<std::string>& items,
                       const RecordIndex& index, const ExperimentConfig& config) {
  SideReader ra(index, col.a, config);
  SideReader rb(index, col.b, config);
  ColumnData d;
  d.a_vector = ra.vector_valued(row);
  d.b_vector = rb.vector_valued(row);
  for (const auto& item : items) {
    auto ma = ra.measure(row, item);
    if (!ma) continue;
    auto mb = rb.measure(row, item);
    if (!mb) continue;
    d.items.push_back(item);
    d.a.push_back(std::move(*ma));
    d.b.push_back(std::move(*mb));
  }
  return d;
}

ColumnData restrict_to(const ColumnData& d, const std::vector<std::string>& items) {
  ColumnData out;
  out.a_vector = d.a_vector;
  out.b_vector = d.b_vector;
  std::size_t k = 0;
  for (const auto& item : items) {
    while (k < d.items.size() && d.items[k] < item) ++k;
    if (k < d.items.size() && d.items[k] == item) {
      out.items.push_back(item);
      out.a.push_back(d.a[k]);
      out.b.push_back(d.b[k]);
    }
  }
  return out;
}

TauResult column_tau(const ColumnData& d, std::span<const std::size_t> idx, double eps) {
  if (!d.a_vector && !d.b_vector && eps == 0.0) {
    std::vector<double> xs(idx.size()), ys(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      xs[k] = d.a[idx[k]][0];
      ys[k] = d.b[idx[k]][0];
    }
    return tau_scalar(xs, ys);
  }
  auto relation = [&](const std::vector<Measure>& side, bool vec) -> PreferenceFn {
    return [&side, vec, idx, eps](std::size_t i, std::size_t j) {
      const auto& mi = side[idx[i]];
      const auto& mj = side[idx[j]];
      return vec ? pareto_compare(std::span<const double>(mi), std::span<const double>(mj))
                 : scalar_compare(mi[0], mj[0], eps);
    };
  };
  return tau_preference(idx.size(), relation(d.a, d.a_vector), relation(d.b, d.b_vector));
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

struct CellResult {
  std::size_t n_items = 0;
  std::optional<TauResult> tau;
  std::string status = "ok";
};

struct IntervalEntry {
  std::string subset;
  std::string table;
  std::string row;
  std::string comparison;
  std::string column_a;
  std::string column_b;
  std::size_t n_items = 0;
  std::optional<BootstrapInterval> interval;
  std::string status = "ok";
};

struct SubsetTables {
  std::string name;
  std::size_t size = 0;
  // table index -> row label -> column label -> (cell, markers)
  std::vector<std::vector<Row>> rows;
  std::vector<std::map<std::string, std::map<std::string, std::pair<CellResult, std::set<Marker>>>>> cells;
};

std::string status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::DegenerateVariable: return "degenerate";
    case ErrorCode::TooFewItems: return "too_few_items";
    case ErrorCode::AllResamplesDegenerate: return "all_resamples_degenerate";
    default: throw e;
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::json interval_json(const IntervalEntry& e) {
  nlohmann::json j;
  j["subset"] = e.subset;
  j["table"] = e.table;
  j["row"] = e.row;
  j["comparison"] = e.comparison;
  j["a"] = e.column_a;
  j["b"] = e.column_b;
  j["n_items"] = e.n_items;
  j["status"] = e.status;
  if (e.interval) {
    const auto& iv = *e.interval;
    j["diff_point"] = iv.diff_point;
    j["lo"] = iv.lo;
    j["hi"] = iv.hi;
    j["n_resamples"] = iv.n_resamples;
    j["correction"] = std::string(to_string(iv.correction));
    j["significant"] = iv.significant;
    j["direction"] = std::string(to_string(iv.direction));
    j["seed"] = iv.seed;
    j["skipped_resamples"] = iv.skipped_resamples;
  }
  return j;
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
  std::vector<RatingRecord> records;
  std::set<std::tuple<std::string, std::string, std::string, std::string>> seen;
  for (const auto& path : config.datasets) {
    for (auto& r : ingest(path, config.domain, config.scales)) {
      auto key = std::make_tuple(r.item_id, r.rater_id, format_condition(r.condition), r.criterion);
      if (!seen.insert(key).second) {
        throw Error(ErrorCode::DuplicateRecord,
                    fmt::format("{}: item {} rater {} {} {} appears in an earlier dataset", path.string(),
                                r.item_id, r.rater_id, format_condition(r.condition), r.criterion));
      }
      records.push_back(std::move(r));
    }
  }
  return run_experiment(config, records);
}

Report run_experiment(const ExperimentConfig& config, const std::vector<RatingRecord>& records) {
  RecordIndex index(records);

  auto require = [&](const SourceSpec& s) {
    if (!index.find(s)) {
      throw Error(ErrorCode::MissingCondition,
                  fmt::format("no {} records under condition {}", to_string(s.rater_kind),
                              format_condition(s.condition)));
    }
  };
  for (const auto& t : config.tables) {
    for (const auto& col : t.columns) {
      require(col.a);
      require(col.b);
    }
  }
  if (config.stratify_on) require(*config.stratify_on);

  std::set<std::string> item_set;
  for (const auto& r : records) item_set.insert(r.item_id);
  std::vector<std::pair<std::string, std::vector<std::string>>> subsets;
  if (config.stratify_on) {
    const auto* src = index.find(*config.stratify_on);
    auto overall = src->find(std::string(kOverall));
    if (overall == src->end()) {
      throw Error(ErrorCode::MissingCondition, "stratification source has no OVERALL scores");
    }
    std::map<std::string, RaterScores> raw;
    for (const auto& [item, raters] : overall->second) {
      for (const auto& [rater, v] : raters) {
        const auto& ids = config.stratify_on->rater_ids;
        if (ids.empty() || std::find(ids.begin(), ids.end(), rater) != ids.end()) raw[item][rater] = v;
      }
    }
    for (auto& [level, items] : partition_by_agreement(raw)) {
      subsets.emplace_back(std::string(to_string(level)), std::move(items));
    }
  } else {
    subsets.emplace_back("all", std::vector<std::string>(item_set.begin(), item_set.end()));
  }

  BootstrapOptions base;
  base.n_resamples = config.n_resamples;
  base.threads = config.threads;

  std::vector<SubsetTables> results;
  std::vector<IntervalEntry> intervals;

  for (std::size_t si = 0; si < subsets.size(); ++si) {
    const auto& [subset_name, subset_items] = subsets[si];
    SubsetTables st;
    st.name = subset_name;
    st.size = subset_items.size();

    for (std::size_t ti = 0; ti < config.tables.size(); ++ti) {
      const auto& table = config.tables[ti];
      std::vector<Row> rows;
      std::map<std::string, std::map<std::string, ColumnData>> data;  // column -> row -> data
      for (const auto& col : table.columns) {
        for (const auto& row : rows_for(col, config)) {
          if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
          data[col.label][row.label] = column_data(col, row, subset_items, index, config);
        }
      }
      std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return (a.kind == RowKind::Overall) > (b.kind == RowKind::Overall);
      });

      auto& table_cells = st.cells.emplace_back();
      for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        const auto& row = rows[ri];
        std::map<std::string, CellResult> row_cells;
        std::map<std::string, double> taus;
        for (const auto& col : table.columns) {
          auto it = data[col.label].find(row.label);
          if (it == data[col.label].end()) continue;
          CellResult cell;
          cell.n_items = it->second.items.size();
          try {
            cell.tau = column_tau(it->second, all_indices(cell.n_items), config.tie_epsilon);
            taus[col.label] = cell.tau->tau;
          } catch (const Error& e) {
            cell.status = status_of(e);
          }
          row_cells[col.label] = cell;
        }

        std::vector<PairComparison> pairs;
        std::vector<TripleComparison> triples;
        for (std::size_t gi = 0; gi < table.groups.size(); ++gi) {
          const auto& group = table.groups[gi];
          bool present = std::all_of(group.columns.begin(), group.columns.end(),
                                     [&](const std::string& c) { return row_cells.contains(c); });
          if (!present) continue;

          std::vector<std::string> common = data[group.columns[0]][row.label].items;
          for (std::size_t k = 1; k < group.columns.size(); ++k) {
            const auto& other = data[group.columns[k]][row.label].items;
            std::vector<std::string> merged;
            std::set_intersection(common.begin(), common.end(), other.begin(), other.end(),
                                  std::back_inserter(merged));
            common = std::move(merged);
          }
          std::vector<ColumnData> members;
          for (const auto& c : group.columns) members.push_back(restrict_to(data[c][row.label], common));
          auto fn = [&](std::size_t m) -> ResampleTauFn {
            const ColumnData* d = &members[m];
            double eps = config.tie_epsilon;
            return [d, eps](std::span<const std::size_t> idx) { return column_tau(*d, idx, eps).tau; };
          };

          BootstrapOptions opts = base;
          opts.seed = derive_seed(config.seed, {si, ti, gi, ri});
          bool usable = std::all_of(group.columns.begin(), group.columns.end(),
                                    [&](const std::string& c) { return row_cells[c].tau.has_value(); });

          auto entry = [&](std::string comparison, const std::string& a, const std::string& b) {
            IntervalEntry e;
            e.subset = subset_name;
            e.table = table.name;
            e.row = row.label;
            e.comparison = std::move(comparison);
            e.column_a = a;
            e.column_b = b;
            e.n_items = common.size();
            return e;
          };

          if (group.type == GroupSpec::Type::Pair) {
            auto e = entry("pair", group.columns[0], group.columns[1]);
            if (!usable) {
              e.status = "skipped";
            } else {
              try {
                opts.correction = Correction::None95;
                e.interval = bootstrap_tau_diff(common.size(), fn(0), fn(1), opts);
                pairs.push_back({group.columns[0], group.columns[1], *e.interval});
              } catch (const Error& err) {
                e.status = status_of(err);
              }
            }
            intervals.push_back(std::move(e));
          } else {
            const auto& sep = group.columns[0];
            const auto& bat = group.columns[1];
            const auto& edi = group.columns[2];
            auto es = entry("edited-separate", edi, sep);
            auto eb = entry("edited-batch", edi, bat);
            auto sb = entry("separate-batch", sep, bat);
            if (!usable) {
              es.status = eb.status = sb.status = "skipped";
            } else {
              try {
                auto tri = compare_triple(common.size(), fn(0), fn(1), fn(2), opts);
                es.interval = tri.edited_vs_separate;
                eb.interval = tri.edited_vs_batch;
                sb.interval = tri.separate_vs_batch;
                triples.push_back({sep, bat, edi, std::move(tri)});
              } catch (const Error& err) {
                es.status = eb.status = sb.status = status_of(err);
              }
            }
            intervals.push_back(std::move(es));
            intervals.push_back(std::move(eb));
            intervals.push_back(std::move(sb));
          }
        }

        auto annotated = annotate_significance(taus, pairs, triples);
        for (auto& [label, cell] : row_cells) {
          std::set<Marker> markers;
          if (auto it = annotated.find(label); it != annotated.end()) markers = it->second.markers;
          table_cells[row.label][label] = {std::move(cell), std::move(markers)};
        }
      }
      st.rows.push_back(std::move(rows));
    }
    results.push_back(std::move(st));
  }

  // Rendering
  Report report;
  std::string csv =
      "subset,subset_size,table,row,column,side_a,side_b,n_items,tau,concordant,discordant,ties_x,ties_y,"
      "ties_both,markers,status\n";
  std::string md = fmt::format("# {}\n", config.title);
  md += fmt::format("\nDomain: {}. Seed: {}. Resamples: {}.\n", to_string(config.domain), config.seed,
                    config.n_resamples);

  for (const auto& st : results) {
    if (config.stratify_on) md += fmt::format("\n## Subset {} ({} items)\n", st.name, st.size);
    for (std::size_t ti = 0; ti < config.tables.size(); ++ti) {
      const auto& table = config.tables[ti];
      const auto& rows = st.rows[ti];
      const auto& cells = st.cells[ti];

      md += fmt::format("\n### {} ({})\n\n| Row |", table.title, to_string(table.variant));
      for (const auto& col : table.columns) md += fmt::format(" {} |", col.label);
      md += "\n|---|";
      for (std::size_t k = 0; k < table.columns.size(); ++k) md += "---|";
      md += '\n';

      for (const auto& row : rows) {
        md += fmt::format("| {} |", row.label);
        const auto& row_cells = cells.at(row.label);
        for (const auto& col : table.columns) {
          auto it = row_cells.find(col.label);
          if (it == row_cells.end()) {
            md += " - |";
            continue;
          }
          const auto& [cell, markers] = it->second;
          auto rendered = render_markers(markers);
          if (cell.tau) {
            md += fmt::format(" {:.3f}{} |", cell.tau->tau, rendered.empty() ? "" : "^" + rendered);
          } else {
            md += fmt::format(" - ({}) |", cell.status);
          }
          csv += fmt::format("{},{},{},{},{},{},{},{},", csv_field(st.name), st.size, csv_field(table.name),
                             csv_field(row.label), csv_field(col.label), csv_field(describe(col.a)),
                             csv_field(describe(col.b)), cell.n_items);
          if (cell.tau) {
            const auto& t = *cell.tau;
            csv += fmt::format("{:.12f},{},{},{},{},{},", t.tau, t.concordant, t.discordant, t.ties_x, t.ties_y,
                               t.ties_both);
          } else {
            csv += ",,,,,,";
          }
          csv += fmt::format("{},{}\n", csv_field(rendered), cell.status);
        }
        md += '\n';
      }
    }
  }
  md += "\nMarkers: † larger of a compared pair; ★ larger between separate and batch; "
        "s/b with ↑ or ↓: edited is larger or smaller than separate (s) or batch (b). "
        "No marker: no significant difference.\n";

  auto j = nlohmann::json::array();
  for (const auto& e : intervals) j.push_back(interval_json(e));

  report.csv = std::move(csv);
  report.intervals_json = j.dump(2) + "\n";
  report.markdown = std::move(md);
  return report;
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, const std::string*>> files{
      {"report.csv", &report.csv}, {"intervals.json", &report.intervals_json}, {"report.md", &report.markdown}};
  for (const auto& [name, content] : files) {
    std::ofstream out(dir / (name + ".tmp"), std::ios::binary);
    out << *content;
    if (!out) {
      for (const auto& [n, c] : files) std::filesystem::remove(dir / (n + ".tmp"));
      throw Error(ErrorCode::IoError, fmt::format("cannot write {}", (dir / name).string()));
    }
  }
  for (const auto& [name, content] : files) std::filesystem::rename(dir / (name + ".tmp"), dir / name);
}

}  // namespace rubeval
