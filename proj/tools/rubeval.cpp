// rubeval: agreement analysis between human and autorater rubric conditions.
//
// Exit codes: 0 success, 1 data error, 2 configuration or usage error.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rubeval/bundle_io.hpp"
#include "rubeval/concordance.hpp"
#include "rubeval/error.hpp"
#include "rubeval/inference.hpp"
#include "rubeval/pipeline.hpp"
#include "rubeval/provider.hpp"
#include "rubeval/records_io.hpp"

using namespace rubeval;
using json = nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

std::vector<double> parse_numbers(const std::string& list) {
  std::vector<double> out;
  for (const auto& f : split(list, ',')) {
    try {
      out.push_back(std::stod(f));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, fmt::format("'{}' is not a number", f));
    }
  }
  return out;
}

// Whitespace- or comma-separated numeric columns; lines starting with '#'
// and a non-numeric header line are skipped.
std::vector<std::vector<double>> read_columns(const std::string& path, std::size_t n_columns) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot open {}", path));
  std::vector<std::vector<double>> cols(n_columns);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char& ch : line) {
      if (ch == ',' || ch == '\t') ch = ' ';
    }
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(f);
    if (parts.empty() || parts[0][0] == '#') continue;
    if (parts.size() != n_columns) {
      throw Error(ErrorCode::ParseError,
                  fmt::format("{}:{}: expected {} columns, found {}", path, line_no, n_columns, parts.size()));
    }
    std::vector<double> values;
    try {
      for (const auto& p : parts) values.push_back(std::stod(p));
    } catch (const std::exception&) {
      if (line_no == 1) continue;
      throw Error(ErrorCode::ParseError, fmt::format("{}:{}: non-numeric field", path, line_no));
    }
    for (std::size_t k = 0; k < n_columns; ++k) cols[k].push_back(values[k]);
  }
  return cols;
}

json tau_json(const TauResult& t) {
  return {{"tau", t.tau},           {"concordant", t.concordant}, {"discordant", t.discordant},
          {"ties_x", t.ties_x},     {"ties_y", t.ties_y},         {"ties_both", t.ties_both},
          {"n_items", t.n_items}};
}

json interval_json(const BootstrapInterval& iv) {
  return {{"diff_point", iv.diff_point},
          {"lo", iv.lo},
          {"hi", iv.hi},
          {"n_resamples", iv.n_resamples},
          {"correction", std::string(to_string(iv.correction))},
          {"significant", iv.significant},
          {"direction", std::string(to_string(iv.direction))},
          {"seed", iv.seed},
          {"skipped_resamples", iv.skipped_resamples}};
}

// ---------------------------------------------------------------------------
// convert

struct ConvertOptions {
  std::string input;
  std::string output;
  int prompt = 0;
  std::string exclude;
  std::string condition;
  std::string id_column = "EssayID";
  std::string rater = "asap++";
  int min_score = 1;
  int max_score = 6;
};

std::string criterion_name(std::string column) {
  std::string out;
  for (char ch : column) {
    if (ch == ' ' || ch == '-') {
      out += '_';
    } else {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
  }
  return out;
}

std::vector<std::string> excluded_ids(const ConvertOptions& o) {
  return o.exclude.empty() ? std::vector<std::string>{} : split(o.exclude, ',');
}

bool is_excluded(const std::vector<std::string>& ids, const std::string& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

// ASAP training TSV: essay_id, essay_set, essay, rater1_domain1, rater2_domain1, [rater3_domain1], ...
void convert_asap(const ConvertOptions& o) {
  std::ifstream in(o.input);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot open {}", o.input));
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty ASAP file");
  auto header = split(strip(line), '\t');
  auto col = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  auto id_col = col("essay_id");
  auto set_col = col("essay_set");
  if (!id_col || !set_col) throw Error(ErrorCode::ParseError, "ASAP header lacks essay_id/essay_set");
  std::vector<std::pair<std::string, std::size_t>> raters;
  for (const char* r : {"rater1_domain1", "rater2_domain1", "rater3_domain1"}) {
    if (auto c = col(r)) raters.emplace_back(std::string(r).substr(0, 6), *c);
  }
  auto exclude = excluded_ids(o);
  ScaleManifest scales;
  scales.holistic = ScoreScale::integer(o.min_score, o.max_score);
  RubricCondition cond =
      o.condition.empty() ? RubricCondition::holistic(ExampleRegime::Full) : parse_condition(o.condition);

  std::vector<RatingRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto f = split(strip(line), '\t');
    if (f.size() < header.size() - 1) continue;
    if (f[*set_col] != std::to_string(o.prompt)) continue;
    if (is_excluded(exclude, f[*id_col])) continue;
    for (const auto& [rater, c] : raters) {
      if (c >= f.size() || strip(f[c]).empty()) continue;
      RatingRecord r;
      r.item_id = f[*id_col];
      r.rater_id = rater;
      r.rater_kind = RaterKind::Human;
      r.condition = cond;
      r.criterion = std::string(kOverall);
      try {
        r.value = std::stod(f[c]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, fmt::format("{}:{}: bad score '{}'", o.input, line_no, f[c]));
      }
      records.push_back(validate_record(r, scales.holistic));
    }
  }
  write_records(o.output, records, Domain::AES, scales);
  std::cerr << fmt::format("wrote {} records to {}\n", records.size(), o.output);
}

// Analytic CSV: one id column plus one column per attribute.
void convert_asap_analytic(const ConvertOptions& o) {
  std::ifstream in(o.input);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot open {}", o.input));
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty analytic file");
  auto header = split(strip(line), ',');
  auto id_it = std::find(header.begin(), header.end(), o.id_column);
  if (id_it == header.end()) throw Error(ErrorCode::ParseError, fmt::format("no '{}' column", o.id_column));
  std::size_t id_col = static_cast<std::size_t>(id_it - header.begin());
  auto exclude = excluded_ids(o);
  ScaleManifest scales;
  scales.analytic = ScoreScale::integer(o.min_score, o.max_score);
  RubricCondition cond = o.condition.empty()
                             ? RubricCondition::analytic(CallStrategy::Separate, ExampleRegime::ZeroEx)
                             : parse_condition(o.condition);

  std::vector<RatingRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto f = split(strip(line), ',');
    if (f.size() != header.size()) {
      throw Error(ErrorCode::ParseError, fmt::format("{}:{}: {} fields, header has {}", o.input, line_no,
                                                     f.size(), header.size()));
    }
    if (is_excluded(exclude, f[id_col])) continue;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == id_col || strip(f[c]).empty()) continue;
      RatingRecord r;
      r.item_id = strip(f[id_col]);
      r.rater_id = o.rater;
      r.rater_kind = RaterKind::Human;
      r.condition = cond;
      r.criterion = criterion_name(strip(header[c]));
      try {
        r.value = std::stod(f[c]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, fmt::format("{}:{}: bad score '{}'", o.input, line_no, f[c]));
      }
      records.push_back(validate_record(r, scales.analytic));
    }
  }
  write_records(o.output, records, Domain::AES, scales);
  std::cerr << fmt::format("wrote {} records to {}\n", records.size(), o.output);
}

// Expert annotation JSONL, one line per (instruction, generation):
//   {"id": "...", "annotations": [{"annotator": "a1", "holistic": 4, "answers": ["YES", "NO", ...]}, ...]}
void convert_infobench(const ConvertOptions& o) {
  std::ifstream in(o.input);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot open {}", o.input));
  ScaleManifest scales;
  scales.holistic = ScoreScale::integer(o.min_score, o.max_score);
  scales.analytic = ScoreScale::binary();
  auto holistic = RubricCondition::holistic(ExampleRegime::ZeroEx);
  auto analytic = RubricCondition::analytic(CallStrategy::Separate, ExampleRegime::ZeroEx);
  auto exclude = excluded_ids(o);

  std::vector<RatingRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    try {
      auto j = json::parse(line);
      auto id = j.at("id").get<std::string>();
      if (is_excluded(exclude, id)) continue;
      for (const auto& a : j.at("annotations")) {
        auto annotator = a.at("annotator").get<std::string>();
        if (a.contains("holistic") && !a.at("holistic").is_null()) {
          RatingRecord r{id, annotator, RaterKind::Human, holistic, std::string(kOverall),
                         a.at("holistic").get<double>(), std::nullopt};
          records.push_back(validate_record(r, scales.holistic));
        }
        const auto& answers = a.value("answers", json::array());
        for (std::size_t q = 0; q < answers.size(); ++q) {
          auto text = answers[q].get<std::string>();
          std::string lower(text);
          std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
          if (lower != "yes" && lower != "no") {
            throw Error(ErrorCode::ParseError, fmt::format("{}:{}: answer '{}' is neither YES nor NO", o.input,
                                                           line_no, text));
          }
          double v = lower == "yes" ? 1.0 : 0.0;
          RatingRecord r{id, annotator, RaterKind::Human, analytic, fmt::format("q{}", q + 1), v, std::nullopt};
          records.push_back(validate_record(r, scales.analytic));
        }
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, fmt::format("{}:{}: {}", o.input, line_no, e.what()));
    }
  }
  write_records(o.output, records, Domain::IF, scales);
  std::cerr << fmt::format("wrote {} records to {}\n", records.size(), o.output);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agreement analysis between human and autorater rubric conditions"};
  app.require_subcommand(1);

  // run
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> resamples_override;
  std::optional<unsigned> threads_override;
  auto* run = app.add_subcommand("run", "Run an experiment config and emit the agreement report");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed_override, "Override the config seed");
  run->add_option("--resamples", resamples_override, "Override the bootstrap resample count");
  run->add_option("--threads", threads_override, "Worker threads for resampling");
  run->add_option("--out", out_dir, "Directory for report.csv, intervals.json, report.md");

  // tau
  std::string tau_x, tau_y, tau_file;
  auto* tau = app.add_subcommand("tau", "Tie-aware Kendall tau between two rating columns");
  tau->add_option("--x", tau_x, "Comma-separated ratings");
  tau->add_option("--y", tau_y, "Comma-separated ratings");
  tau->add_option("--file", tau_file, "Two-column file (whitespace or comma separated)");

  // bootstrap
  std::string boot_file, boot_correction = "None95";
  std::uint64_t boot_seed = 0;
  std::size_t boot_resamples = 1000;
  unsigned boot_threads = 1;
  auto* boot = app.add_subcommand(
      "bootstrap", "Bootstrap tau(ref, a) - tau(ref, b) from a three-column file: ref a b");
  boot->add_option("--file", boot_file, "Three-column file")->required();
  boot->add_option("--seed", boot_seed, "Seed")->required();
  boot->add_option("--resamples", boot_resamples, "Resamples (default 1000)");
  boot->add_option("--correction", boot_correction, "None95 or Bonferroni3");
  boot->add_option("--threads", boot_threads, "Worker threads");

  // convert
  ConvertOptions conv;
  auto* convert = app.add_subcommand("convert", "Convert dataset files into rating records");
  convert->require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", conv.input, "Source file")->required();
    sub->add_option("--out", conv.output, "Output JSONL")->required();
    sub->add_option("--exclude", conv.exclude, "Comma-separated ids to drop (e.g. prompt examples)");
    sub->add_option("--min", conv.min_score, "Scale minimum");
    sub->add_option("--max", conv.max_score, "Scale maximum");
  };
  auto* asap = convert->add_subcommand("asap", "ASAP training TSV -> human holistic records");
  add_common(asap);
  asap->add_option("--prompt", conv.prompt, "essay_set to keep")->required();
  asap->add_option("--condition", conv.condition, "Condition label (default holistic/full)");
  auto* asap_an = convert->add_subcommand("asap-analytic", "Attribute CSV -> human analytic records");
  add_common(asap_an);
  asap_an->add_option("--id-column", conv.id_column, "Essay id column (default EssayID)");
  asap_an->add_option("--rater", conv.rater, "Rater id (default asap++)");
  asap_an->add_option("--condition", conv.condition, "Condition label (default analytic/separate/0ex)");
  auto* infob = convert->add_subcommand("infobench", "Expert annotation JSONL -> holistic + yes/no records");
  add_common(infob);

  // prompts / replay-check / rate
  std::string bundle_path, items_path, store_dir, rater_id = "autorater", records_out;
  std::vector<std::string> conditions;
  unsigned query_threads = 1;
  auto* prompts = app.add_subcommand("prompts", "Emit assembled prompts (JSONL) for inspection");
  prompts->add_option("--bundle", bundle_path, "Rubric bundle (JSON)")->required();
  prompts->add_option("--items", items_path, "Items (JSONL)")->required();
  prompts->add_option("--condition", conditions, "Condition(s), e.g. analytic/separate/3ex/edited")->required();

  auto* check = app.add_subcommand("replay-check", "Verify the replay store covers every prompt");
  check->add_option("--bundle", bundle_path, "Rubric bundle (JSON)")->required();
  check->add_option("--items", items_path, "Items (JSONL)")->required();
  check->add_option("--condition", conditions, "Condition(s)")->required();
  check->add_option("--store", store_dir, "Replay store directory")->required();

  auto* rate = app.add_subcommand("rate", "Score items from the replay store into autorater records");
  rate->add_option("--bundle", bundle_path, "Rubric bundle (JSON)")->required();
  rate->add_option("--items", items_path, "Items (JSONL)")->required();
  rate->add_option("--condition", conditions, "Condition(s)")->required();
  rate->add_option("--store", store_dir, "Replay store directory")->required();
  rate->add_option("--rater-id", rater_id, "Rater id for the records");
  rate->add_option("--out", records_out, "Output JSONL")->required();
  rate->add_option("--threads", query_threads, "Concurrent requests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      auto config = load_config(config_path);
      if (seed_override) config.seed = *seed_override;
      if (resamples_override) config.n_resamples = *resamples_override;
      if (threads_override) config.threads = *threads_override;
      auto report = run_experiment(config);
      if (out_dir.empty()) {
        std::cout << report.markdown;
      } else {
        write_report(report, out_dir);
        std::cerr << fmt::format("wrote {}/report.csv, intervals.json, report.md\n", out_dir);
      }
    } else if (tau->parsed()) {
      std::vector<double> x, y;
      if (!tau_file.empty()) {
        auto cols = read_columns(tau_file, 2);
        x = cols[0];
        y = cols[1];
      } else {
        if (tau_x.empty() || tau_y.empty()) throw Error(ErrorCode::ConfigError, "give --x and --y, or --file");
        x = parse_numbers(tau_x);
        y = parse_numbers(tau_y);
      }
      std::cout << tau_json(tau_scalar(x, y)).dump(2) << '\n';
    } else if (boot->parsed()) {
      auto cols = read_columns(boot_file, 3);
      BootstrapOptions opts;
      opts.n_resamples = boot_resamples;
      opts.seed = boot_seed;
      opts.threads = boot_threads;
      try {
        opts.correction = parse_correction(boot_correction);
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, e.detail());
      }
      auto iv = bootstrap_tau_diff(cols[0].size(), scalar_tau_fn(cols[0], cols[1]), scalar_tau_fn(cols[0], cols[2]),
                                   opts);
      std::cout << interval_json(iv).dump(2) << '\n';
    } else if (convert->parsed()) {
      if (asap->parsed()) convert_asap(conv);
      if (asap_an->parsed()) convert_asap_analytic(conv);
      if (infob->parsed()) convert_infobench(conv);
    } else if (prompts->parsed() || check->parsed() || rate->parsed()) {
      auto bundle = load_bundle(bundle_path);
      auto items = load_items(items_path);
      std::vector<RubricCondition> conds;
      for (const auto& c : conditions) {
        try {
          conds.push_back(parse_condition(c));
        } catch (const Error& e) {
          throw Error(ErrorCode::ConfigError, e.detail());
        }
      }
      if (prompts->parsed()) {
        for (const auto& cond : conds) {
          for (const auto& item : items) {
            auto item_bundle = bundle_for_item(bundle, item);
            auto texts = assemble_prompts(cond, item_bundle, item.text);
            auto answered = prompt_criteria(cond, item_bundle);
            for (std::size_t k = 0; k < texts.size(); ++k) {
              json j{{"item_id", item.item_id},
                     {"condition", format_condition(cond)},
                     {"index", k},
                     {"criteria", answered[k]},
                     {"prompt_hash", prompt_hash(texts[k])},
                     {"prompt", texts[k]}};
              std::cout << j.dump() << '\n';
            }
          }
        }
      } else if (check->parsed()) {
        ReplayProvider store(store_dir);
        std::size_t total = 0, missing = 0;
        for (const auto& cond : conds) {
          for (const auto& item : items) {
            for (const auto& text : assemble_prompts(cond, bundle_for_item(bundle, item), item.text)) {
              ++total;
              auto hash = prompt_hash(text);
              if (!store.contains(hash)) {
                ++missing;
                std::cout << fmt::format("missing {} item {} {}\n", hash, item.item_id, format_condition(cond));
              }
            }
          }
        }
        std::cout << fmt::format("{} of {} prompts covered\n", total - missing, total);
        if (missing > 0) return 1;
      } else {
        ReplayProvider store(store_dir);
        std::vector<RatingRecord> records;
        for (const auto& cond : conds) {
          for (const auto& item : items) {
            for (auto& r : rate_item(store, cond, bundle_for_item(bundle, item), item.item_id, item.text, rater_id,
                                     query_threads)) {
              records.push_back(std::move(r));
            }
          }
        }
        ScaleManifest scales;
        scales.holistic = bundle.scale;
        scales.analytic = bundle.scale;
        write_records(records_out, records, bundle.domain, scales);
        std::cerr << fmt::format("wrote {} records to {}\n", records.size(), records_out);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_config_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
