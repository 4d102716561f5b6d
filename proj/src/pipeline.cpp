// Copyright 2026 The chatmos Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chatmos/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "chatmos/csv.hpp"
#include "chatmos/errors.hpp"
#include "chatmos/time_utils.hpp"

namespace chatmos {

namespace {

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: key \"") + key + "\": " + e.what());
  }
}

std::vector<std::string> get_string_list(const nlohmann::json& obj,
                                         const char* key) {
  return get_or<std::vector<std::string>>(obj, key, {});
}

std::set<std::string> get_string_set(const nlohmann::json& obj,
                                     const char* key) {
  auto list = get_string_list(obj, key);
  return {list.begin(), list.end()};
}

Instant get_instant(const nlohmann::json& obj, const char* key,
                    Instant fallback) {
  if (!obj.contains(key)) return fallback;
  const auto text = get_or<std::string>(obj, key, "");
  try {
    return parse_instant(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: key \"") + key + "\": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
  return p.is_absolute() ? p : base / p;
}

// Stage wrapper: domain and config errors keep their type, anything else
// is reported as a pipeline failure naming the stage.
template <typename Fn>
auto run_stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(std::string(name) + ": " + e.what());
  }
}

double parse_double_field(const std::string& field, const char* what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw CsvError(std::string(what) + ": not a number: " + field);
  }
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const nlohmann::json& doc,
                                         const std::filesystem::path& base) {
  if (!doc.is_object()) {
    throw ConfigError("config: document is not a JSON object");
  }
  PipelineConfig cfg;

  if (const auto input = get_or<std::string>(doc, "input", "");
      !input.empty()) {
    cfg.input = resolve(base, input);
  }
  if (const auto output = get_or<std::string>(doc, "output_dir", "");
      !output.empty()) {
    cfg.output_dir = resolve(base, output);
  }

  cfg.resume = get_or<bool>(doc, "resume", true);

  if (doc.contains("normalization")) {
    const auto& n = doc.at("normalization");
    cfg.normalization.collapse_run_length =
        get_or<int>(n, "collapse_run_length",
                    cfg.normalization.collapse_run_length);
    cfg.normalization.strip_punctuation =
        get_or<bool>(n, "strip_punctuation",
                     cfg.normalization.strip_punctuation);
    cfg.normalization.strip_symbols =
        get_or<bool>(n, "strip_symbols", cfg.normalization.strip_symbols);
    if (n.contains("typo_table")) {
      cfg.normalization.typo_table =
          get_or<std::map<std::string, std::string>>(n, "typo_table", {});
    }
    if (n.contains("emote_denylist")) {
      cfg.normalization.emote_denylist = get_string_set(n, "emote_denylist");
    }
  }

  if (doc.contains("lexicon")) {
    const auto& l = doc.at("lexicon");
    if (l.contains("problem_keywords")) {
      cfg.lexicon.problem_keywords = get_string_set(l, "problem_keywords");
    }
    if (l.contains("context_keywords")) {
      cfg.lexicon.context_keywords = get_string_set(l, "context_keywords");
    }
    if (l.contains("meme_keywords")) {
      cfg.lexicon.meme_keywords = get_string_set(l, "meme_keywords");
    }
  }

  if (doc.contains("anchors")) {
    cfg.anchor_phrases = get_string_list(doc, "anchors");
  }

  if (doc.contains("filter")) {
    const auto& f = doc.at("filter");
    cfg.thresholds.min_words =
        get_or<int>(f, "min_words", cfg.thresholds.min_words);
    cfg.thresholds.short_text_threshold = get_or<double>(
        f, "short_text_threshold", cfg.thresholds.short_text_threshold);
    cfg.thresholds.long_text_threshold = get_or<double>(
        f, "long_text_threshold", cfg.thresholds.long_text_threshold);
    cfg.embed_batch_size =
        get_or<std::size_t>(f, "embed_batch_size", cfg.embed_batch_size);
    cfg.embedding_provider =
        get_or<std::string>(f, "provider", cfg.embedding_provider);
    cfg.embedding_dimension =
        get_or<std::size_t>(f, "dimension", cfg.embedding_dimension);
  }

  if (doc.contains("scoring")) {
    const auto& s = doc.at("scoring");
    cfg.scoring_backend =
        get_or<std::string>(s, "backend", cfg.scoring_backend);
    cfg.backend.pacing_seconds =
        get_or<double>(s, "pacing_seconds", cfg.backend.pacing_seconds);
    cfg.backend.max_retries =
        get_or<int>(s, "max_retries", cfg.backend.max_retries);
    cfg.backend.deterministic =
        get_or<bool>(s, "deterministic", cfg.backend.deterministic);
    cfg.backend.endpoint =
        get_or<std::string>(s, "endpoint", cfg.backend.endpoint);
    cfg.backend.api_key =
        get_or<std::string>(s, "api_key", cfg.backend.api_key);
    cfg.backend.model = get_or<std::string>(s, "model", cfg.backend.model);
    if (s.contains("prompt_file")) {
      cfg.prompt = ScoringPrompt::from_file(
          resolve(base, get_or<std::string>(s, "prompt_file", "")));
    }
  }

  if (doc.contains("simulation")) {
    const auto& sim = doc.at("simulation");
    if (sim.contains("isps")) {
      cfg.simulation.isps = get_string_list(sim, "isps");
    }
    cfg.simulation.seed =
        get_or<std::uint64_t>(sim, "seed", cfg.simulation.seed);
    cfg.simulation.base_time =
        get_instant(sim, "base_time", cfg.simulation.base_time);
    cfg.simulation.step = Seconds{
        get_or<std::int64_t>(sim, "step_seconds",
                             cfg.simulation.step.count())};
  }

  if (doc.contains("outage") && !doc.at("outage").is_null()) {
    const auto& o = doc.at("outage");
    OutageSpec outage;
    outage.target_isp = get_or<std::string>(o, "target_isp", "");
    outage.start = get_instant(o, "start", outage.start);
    outage.end = get_instant(o, "end", outage.end);
    outage.forced_mos = get_or<int>(o, "forced_mos", outage.forced_mos);
    cfg.outage = outage;
  }

  if (doc.contains("aggregation")) {
    cfg.window_width = Seconds{get_or<std::int64_t>(
        doc.at("aggregation"), "window_seconds", cfg.window_width.count())};
  }

  if (doc.contains("detection")) {
    const auto& d = doc.at("detection");
    cfg.detection.threshold =
        get_or<double>(d, "threshold", cfg.detection.threshold);
    cfg.detection.min_run = get_or<int>(d, "min_run", cfg.detection.min_run);
  }

  if (doc.contains("objective_series")) {
    cfg.objective_series =
        resolve(base, get_or<std::string>(doc, "objective_series", ""));
  }

  cfg.validate_settings();
  return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw ConfigError("config: cannot open " + path.string());
  }
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    throw ConfigError("config: invalid JSON in " + path.string());
  }
  return from_json(doc, path.parent_path());
}

void PipelineConfig::validate() const {
  if (input.empty()) throw ConfigError("config: input path is empty");
  if (output_dir.empty()) throw ConfigError("config: output_dir is empty");
  validate_settings();
}

void PipelineConfig::validate_settings() const {
  normalization.validate();
  lexicon.validate(normalization);
  if (anchor_phrases.empty()) {
    throw ConfigError("config: anchor phrase list is empty");
  }
  thresholds.validate();
  if (embed_batch_size == 0) {
    throw ConfigError("config: embed_batch_size must be >= 1");
  }
  if (embedding_provider != "stub" && embedding_provider != "remote") {
    throw ConfigError("config: unknown embedding provider: " +
                      embedding_provider);
  }
  if (embedding_dimension == 0) {
    throw ConfigError("config: embedding dimension must be positive");
  }
  if (scoring_backend != "stub" && scoring_backend != "remote") {
    throw ConfigError("config: unknown scoring backend: " + scoring_backend);
  }
  backend.validate();
  prompt.validate();
  simulation.validate();
  if (outage) {
    outage->validate();
    if (std::find(simulation.isps.begin(), simulation.isps.end(),
                  outage->target_isp) == simulation.isps.end()) {
      throw ConfigError("config: outage target " + outage->target_isp +
                        " is not a simulated isp");
    }
  }
  if (window_width <= Seconds::zero()) {
    throw ConfigError("config: window_seconds must be positive");
  }
  detection.validate();
}

std::vector<std::string> read_comments(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("input: no such file: " + path.string());
  }
  std::vector<std::string> out;
  if (path.extension() == ".csv") {
    const CsvTable table = read_csv_file(path);
    std::size_t col = 0;
    try {
      col = table.column("original_comment");
    } catch (const CsvError&) {
      col = table.column("comment");
    }
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) out.push_back(row[col]);
    return out;
  }
  std::ifstream in(path);
  if (!in.is_open()) {
    throw ConfigError("input: cannot open " + path.string());
  }
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

namespace {

std::unique_ptr<EmbeddingProvider> make_embedding_provider(
    const PipelineConfig& config) {
  if (config.embedding_provider == "stub") {
    return std::make_unique<HashedEmbeddingProvider>(
        config.embedding_dimension);
  }
  return std::make_unique<RemoteEmbeddingProvider>(
      "", "", config.embedding_dimension);
}

std::vector<ObjectivePoint> read_objective_series(
    const std::filesystem::path& path, Seconds width) {
  const CsvTable table = read_csv_file(path);
  const std::size_t time_col = table.column("time_window");
  const std::size_t isp_col = table.column("isp");
  const std::size_t mos_col = table.column("objective_mos");
  std::vector<ObjectivePoint> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    ObjectivePoint point;
    point.window.start = parse_instant(row[time_col]);
    point.window.width = width;
    if (floor_window(point.window.start, width) != point.window.start) {
      throw ConfigError("objective series: window " + row[time_col] +
                        " is not aligned to the " +
                        std::to_string(width.count()) + "s grid");
    }
    point.isp = row[isp_col];
    point.mos = parse_double_field(row[mos_col], "objective_mos");
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();

  // Input problems surface before any artifact is created.
  const std::vector<std::string> raws = read_comments(config.input);

  std::filesystem::create_directories(config.output_dir);
  const auto checkpoints_dir = config.output_dir / "checkpoints";
  std::filesystem::create_directories(checkpoints_dir);
  const auto filter_checkpoint = checkpoints_dir / "filter.jsonl";
  const auto score_checkpoint = checkpoints_dir / "scores.jsonl";
  if (!config.resume) {
    std::filesystem::remove(filter_checkpoint);
    std::filesystem::remove(score_checkpoint);
  }

  PipelineResult result;
  result.input_comments = raws.size();

  const auto decisions = run_stage("filter", [&] {
    auto provider = make_embedding_provider(config);
    const AnchorSet anchors =
        AnchorSet::build(config.anchor_phrases, *provider);
    FilterOptions options;
    options.embed_batch_size = config.embed_batch_size;
    options.checkpoint_path = filter_checkpoint;
    return filter_batch(raws, config.normalization, config.lexicon, anchors,
                        config.thresholds, *provider, options);
  });

  std::vector<std::string> candidates;
  {
    std::vector<CsvRow> rows;
    for (const auto& d : decisions) {
      if (!d.passed) continue;
      candidates.push_back(d.original);
      rows.push_back({d.original, d.normalized, format_double(*d.similarity),
                      std::to_string(d.word_count)});
    }
    const auto path = config.output_dir / "loose_qoe_candidates_cleaned.csv";
    write_csv_file(path,
                   {"original_comment", "normalized_comment", "similarity",
                    "word_count"},
                   rows);
    result.artifacts["candidates"] = path;
    result.filter_passed = candidates.size();
  }

  const auto batch = run_stage("scoring", [&] {
    const auto backend = make_backend(config.scoring_backend, config.backend);
    ScoreOptions options;
    options.checkpoint_path = score_checkpoint;
    return score_batch(*backend, config.prompt, candidates, config.backend,
                       options);
  });

  {
    std::vector<CsvRow> scored_rows;
    std::vector<CsvRow> excluded_rows;
    for (const auto& row : batch.rows) {
      if (row.scored) {
        scored_rows.push_back({row.comment, std::to_string(row.mos)});
      }
      if (!row.scored) {
        excluded_rows.push_back(
            {row.comment, "-1", "scoring_failed: " + row.error});
      } else if (row.mos == -1) {
        excluded_rows.push_back({row.comment, "-1", "not_experience_related"});
      }
    }
    const auto scored_path = config.output_dir / "scored_comments.csv";
    write_csv_file(scored_path, {"original_comment", "comment_mos"},
                   scored_rows);
    result.artifacts["scored_comments"] = scored_path;

    const auto excluded_path = config.output_dir / "excluded_comments.csv";
    write_csv_file(excluded_path, {"original_comment", "comment_mos", "reason"},
                   excluded_rows);
    result.artifacts["excluded_comments"] = excluded_path;

    result.stats = dataset_stats(batch.rows);
    const auto stats_path = config.output_dir / "stats.json";
    std::ofstream out(stats_path);
    if (!out.is_open()) {
      throw PipelineError("scoring: cannot write " + stats_path.string());
    }
    nlohmann::json doc = stats_to_json(result.stats);
    doc["input_comments"] = result.input_comments;
    doc["filter_passed"] = result.filter_passed;
    out << doc.dump(2) << '\n';
    result.artifacts["stats"] = stats_path;
  }

  auto records = run_stage("enrichment", [&] {
    auto enriched = enrich(batch.valid(), config.simulation);
    if (config.outage) {
      result.outage_rows_touched = inject_outage(enriched, *config.outage);
    }
    return enriched;
  });

  {
    std::vector<CsvRow> rows;
    rows.reserve(records.size());
    for (const auto& record : records) {
      rows.push_back({record.isp, format_instant(record.timestamp),
                      record.original_comment, std::to_string(record.mos)});
    }
    const auto path = config.output_dir / "enriched_comments.csv";
    write_csv_file(path, {"isp", "timestamp", "original_comment", "mos"},
                   rows);
    result.artifacts["enriched_comments"] = path;
  }

  run_stage("aggregation", [&] {
    result.aggregates = aggregate(records, config.window_width);
    result.globals = global_mos(result.aggregates);
    result.deltas = delta_mos(result.aggregates, result.globals);
    return 0;
  });

  {
    std::vector<CsvRow> rows;
    for (const auto& agg : result.aggregates) {
      rows.push_back({format_instant(agg.window.start), agg.isp,
                      std::to_string(agg.comment_count),
                      format_double(agg.avg_mos)});
    }
    const auto path = config.output_dir / "window_aggregates.csv";
    write_csv_file(path, {"time_window", "isp", "comment_count", "avg_mos"},
                   rows);
    result.artifacts["window_aggregates"] = path;

    std::vector<CsvRow> global_rows;
    for (const auto& point : result.globals) {
      global_rows.push_back({format_instant(point.window.start),
                             format_double(point.global_mos),
                             std::to_string(point.isp_count)});
    }
    const auto global_path = config.output_dir / "global_mos.csv";
    write_csv_file(global_path, {"time_window", "global_mos", "isp_count"},
                   global_rows);
    result.artifacts["global_mos"] = global_path;

    std::vector<CsvRow> delta_rows;
    for (const auto& point : result.deltas) {
      delta_rows.push_back({format_instant(point.window.start), point.isp,
                            format_double(point.delta)});
    }
    const auto delta_path = config.output_dir / "delta_mos.csv";
    write_csv_file(delta_path, {"time_window", "isp", "delta_mos"},
                   delta_rows);
    result.artifacts["delta_mos"] = delta_path;
  }

  run_stage("detection", [&] {
    result.episodes = detect_episodes(result.deltas, config.detection);
    return 0;
  });

  {
    std::vector<CsvRow> rows;
    for (const auto& episode : result.episodes) {
      rows.push_back({episode.isp, format_instant(episode.first_window.start),
                      format_instant(episode.last_window.start),
                      std::to_string(episode.length),
                      format_double(episode.min_delta)});
    }
    const auto path = config.output_dir / "alert_episodes.csv";
    write_csv_file(
        path, {"isp", "first_window", "last_window", "length", "min_delta"},
        rows);
    result.artifacts["alert_episodes"] = path;
  }

  run_stage("reporting", [&] {
    const auto reports_dir = config.output_dir / "reports";
    std::filesystem::create_directories(reports_dir);
    for (const auto& isp : config.simulation.isps) {
      const OperatorReport report = operator_report(
          isp, config.simulation.isps, result.aggregates, result.globals,
          result.episodes);
      const auto path =
          reports_dir / (sanitize_filename_part(isp) + ".json");
      std::ofstream out(path);
      if (!out.is_open()) {
        throw PipelineError("reporting: cannot write " + path.string());
      }
      out << report_to_json(report).dump(2) << '\n';
      result.artifacts["report_" + isp] = path;
    }
    const auto plot_paths =
        emit_plot_series(result.globals, result.deltas,
                         config.output_dir / "plots",
                         config.detection.threshold);
    result.artifacts["plots_manifest"] = plot_paths.back();
    if (config.objective_series) {
      const auto objective =
          read_objective_series(*config.objective_series, config.window_width);
      const auto discrepancies =
          compare_objective(result.aggregates, objective);
      std::vector<CsvRow> rows;
      for (const auto& point : discrepancies) {
        auto field = [](const std::optional<double>& v) {
          return v ? format_double(*v) : std::string();
        };
        rows.push_back({format_instant(point.window.start), point.isp,
                        field(point.subjective), field(point.objective),
                        field(point.discrepancy)});
      }
      const auto path = config.output_dir / "discrepancy.csv";
      write_csv_file(path,
                     {"time_window", "isp", "subjective_mos", "objective_mos",
                      "discrepancy"},
                     rows);
      result.artifacts["discrepancy"] = path;
    }
    return 0;
  });

  return result;
}

}  // namespace chatmos
