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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chatmos/aggregate.hpp"
#include "chatmos/csv.hpp"
#include "chatmos/enrich.hpp"
#include "chatmos/errors.hpp"
#include "chatmos/filter.hpp"
#include "chatmos/pipeline.hpp"
#include "chatmos/report.hpp"
#include "chatmos/scoring.hpp"
#include "chatmos/time_utils.hpp"

namespace {

using namespace chatmos;

PipelineConfig load_config(const std::string& path) {
  if (path.empty()) return PipelineConfig{};
  return PipelineConfig::from_file(path);
}

std::unique_ptr<EmbeddingProvider> make_provider(const PipelineConfig& cfg) {
  if (cfg.embedding_provider == "stub") {
    return std::make_unique<HashedEmbeddingProvider>(cfg.embedding_dimension);
  }
  return std::make_unique<RemoteEmbeddingProvider>("", "",
                                                   cfg.embedding_dimension);
}

std::vector<ScoredComment> read_scored_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  const std::size_t comment_col = table.column("original_comment");
  const std::size_t mos_col = table.column("comment_mos");
  std::vector<ScoredComment> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    int mos = 0;
    try {
      mos = std::stoi(row[mos_col]);
    } catch (const std::exception&) {
      throw CsvError("comment_mos: not an integer: " + row[mos_col]);
    }
    out.emplace_back(row[comment_col], mos);
  }
  return out;
}

std::vector<EnrichedRecord> read_enriched_csv(
    const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  const std::size_t isp_col = table.column("isp");
  const std::size_t time_col = table.column("timestamp");
  const std::size_t comment_col = table.column("original_comment");
  const std::size_t mos_col = table.column("mos");
  std::vector<EnrichedRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    EnrichedRecord record;
    record.isp = row[isp_col];
    record.timestamp = parse_instant(row[time_col]);
    record.original_comment = row[comment_col];
    record.mos = std::stoi(row[mos_col]);
    out.push_back(std::move(record));
  }
  return out;
}

std::vector<WindowAggregate> read_aggregates_csv(
    const std::filesystem::path& path, Seconds width) {
  const CsvTable table = read_csv_file(path);
  const std::size_t time_col = table.column("time_window");
  const std::size_t isp_col = table.column("isp");
  const std::size_t count_col = table.column("comment_count");
  const std::size_t avg_col = table.column("avg_mos");
  std::vector<WindowAggregate> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    WindowAggregate agg;
    agg.window = {parse_instant(row[time_col]), width};
    agg.isp = row[isp_col];
    agg.comment_count = std::stoll(row[count_col]);
    agg.avg_mos = std::stod(row[avg_col]);
    agg.mos_sum = std::llround(agg.avg_mos *
                               static_cast<double>(agg.comment_count));
    out.push_back(std::move(agg));
  }
  return out;
}

std::vector<DeltaPoint> read_deltas_csv(const std::filesystem::path& path,
                                        Seconds width) {
  const CsvTable table = read_csv_file(path);
  const std::size_t time_col = table.column("time_window");
  const std::size_t isp_col = table.column("isp");
  const std::size_t delta_col = table.column("delta_mos");
  std::vector<DeltaPoint> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    out.push_back({{parse_instant(row[time_col]), width}, row[isp_col],
                   std::stod(row[delta_col])});
  }
  return out;
}

std::vector<Episode> read_episodes_csv(const std::filesystem::path& path,
                                       Seconds width) {
  const CsvTable table = read_csv_file(path);
  const std::size_t isp_col = table.column("isp");
  const std::size_t first_col = table.column("first_window");
  const std::size_t last_col = table.column("last_window");
  const std::size_t length_col = table.column("length");
  const std::size_t min_col = table.column("min_delta");
  std::vector<Episode> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    Episode episode;
    episode.isp = row[isp_col];
    episode.first_window = {parse_instant(row[first_col]), width};
    episode.last_window = {parse_instant(row[last_col]), width};
    episode.length = std::stoi(row[length_col]);
    episode.min_delta = std::stod(row[min_col]);
    out.push_back(std::move(episode));
  }
  return out;
}

void write_scoring_outputs(const ScoreBatchResult& batch,
                           std::size_t input_comments,
                           const std::filesystem::path& out_dir) {
  std::vector<CsvRow> scored_rows;
  std::vector<CsvRow> excluded_rows;
  for (const auto& row : batch.rows) {
    if (row.scored) {
      scored_rows.push_back({row.comment, std::to_string(row.mos)});
      if (row.mos == -1) {
        excluded_rows.push_back({row.comment, "-1", "not_experience_related"});
      }
    } else {
      excluded_rows.push_back(
          {row.comment, "-1", "scoring_failed: " + row.error});
    }
  }
  write_csv_file(out_dir / "scored_comments.csv",
                 {"original_comment", "comment_mos"}, scored_rows);
  write_csv_file(out_dir / "excluded_comments.csv",
                 {"original_comment", "comment_mos", "reason"}, excluded_rows);
  nlohmann::json doc = stats_to_json(dataset_stats(batch.rows));
  doc["input_comments"] = input_comments;
  std::ofstream stats(out_dir / "stats.json");
  stats << doc.dump(2) << '\n';
}

void write_aggregation_outputs(const std::vector<WindowAggregate>& aggs,
                               const std::vector<GlobalPoint>& globals,
                               const std::vector<DeltaPoint>& deltas,
                               const std::filesystem::path& out_dir) {
  std::vector<CsvRow> agg_rows;
  for (const auto& agg : aggs) {
    agg_rows.push_back({format_instant(agg.window.start), agg.isp,
                        std::to_string(agg.comment_count),
                        format_double(agg.avg_mos)});
  }
  write_csv_file(out_dir / "window_aggregates.csv",
                 {"time_window", "isp", "comment_count", "avg_mos"}, agg_rows);

  std::vector<CsvRow> global_rows;
  for (const auto& point : globals) {
    global_rows.push_back({format_instant(point.window.start),
                           format_double(point.global_mos),
                           std::to_string(point.isp_count)});
  }
  write_csv_file(out_dir / "global_mos.csv",
                 {"time_window", "global_mos", "isp_count"}, global_rows);

  std::vector<CsvRow> delta_rows;
  for (const auto& point : deltas) {
    delta_rows.push_back({format_instant(point.window.start), point.isp,
                          format_double(point.delta)});
  }
  write_csv_file(out_dir / "delta_mos.csv",
                 {"time_window", "isp", "delta_mos"}, delta_rows);
}

void write_episodes_csv(const std::vector<Episode>& episodes,
                        const std::filesystem::path& path) {
  std::vector<CsvRow> rows;
  for (const auto& episode : episodes) {
    rows.push_back({episode.isp, format_instant(episode.first_window.start),
                    format_instant(episode.last_window.start),
                    std::to_string(episode.length),
                    format_double(episode.min_delta)});
  }
  write_csv_file(path, {"isp", "first_window", "last_window", "length",
                        "min_delta"},
                 rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subjective QoE pipeline for live-stream comments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string input_path;
  std::string output_path;
  std::string output_dir;
  std::string aggregates_path;
  std::string episodes_path;

  auto* cmd_normalize =
      app.add_subcommand("normalize", "Clean comments and count words");
  cmd_normalize->add_option("--config", config_path, "Pipeline config JSON");
  cmd_normalize->add_option("--input", input_path, "Comment CSV or text file")
      ->required();
  cmd_normalize->add_option("--output", output_path,
                            "Output CSV (stdout when omitted)");

  auto* cmd_filter = app.add_subcommand(
      "filter", "Select QoE-relevant comments (rules + embedding)");
  cmd_filter->add_option("--config", config_path, "Pipeline config JSON");
  cmd_filter->add_option("--input", input_path, "Comment CSV or text file")
      ->required();
  cmd_filter->add_option("--output-dir", output_dir, "Artifact directory")
      ->required();

  auto* cmd_score =
      app.add_subcommand("score", "Rate filtered comments 1-5 or -1");
  cmd_score->add_option("--config", config_path, "Pipeline config JSON");
  cmd_score->add_option("--input", input_path, "Candidate comment CSV")
      ->required();
  cmd_score->add_option("--output-dir", output_dir, "Artifact directory")
      ->required();

  auto* cmd_enrich = app.add_subcommand(
      "enrich", "Attach simulated ISP labels and timestamps");
  cmd_enrich->add_option("--config", config_path, "Pipeline config JSON");
  cmd_enrich->add_option("--input", input_path, "Scored comment CSV")
      ->required();
  cmd_enrich->add_option("--output", output_path, "Enriched CSV path")
      ->required();

  auto* cmd_aggregate = app.add_subcommand(
      "aggregate", "Window aggregation, global MOS, and delta MOS");
  cmd_aggregate->add_option("--config", config_path, "Pipeline config JSON");
  cmd_aggregate->add_option("--input", input_path, "Enriched comment CSV")
      ->required();
  cmd_aggregate->add_option("--output-dir", output_dir, "Artifact directory")
      ->required();

  auto* cmd_detect =
      app.add_subcommand("detect", "Find sub-threshold delta episodes");
  cmd_detect->add_option("--config", config_path, "Pipeline config JSON");
  cmd_detect->add_option("--input", input_path, "Delta MOS CSV")->required();
  cmd_detect->add_option("--output", output_path, "Episode CSV path")
      ->required();

  auto* cmd_report = app.add_subcommand(
      "report", "Operator reports and plot series from aggregates");
  cmd_report->add_option("--config", config_path, "Pipeline config JSON");
  cmd_report->add_option("--aggregates", aggregates_path,
                         "window_aggregates.csv from the aggregate step")
      ->required();
  cmd_report->add_option("--episodes", episodes_path,
                         "alert_episodes.csv (recomputed when omitted)");
  cmd_report->add_option("--output-dir", output_dir, "Artifact directory")
      ->required();

  auto* cmd_pipeline =
      app.add_subcommand("pipeline", "Run every stage end to end");
  cmd_pipeline->add_option("--config", config_path, "Pipeline config JSON")
      ->required();
  cmd_pipeline->add_option("--input", input_path, "Override config input");
  cmd_pipeline->add_option("--output-dir", output_dir,
                           "Override config output_dir");

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig cfg = load_config(config_path);

    if (*cmd_normalize) {
      const auto comments = read_comments(input_path);
      std::vector<CsvRow> rows;
      rows.reserve(comments.size());
      for (const auto& comment : comments) {
        const std::string normalized =
            normalize_text(comment, cfg.normalization);
        rows.push_back({comment, normalized,
                        std::to_string(word_count(normalized))});
      }
      const CsvRow header = {"original_comment", "normalized_comment",
                             "word_count"};
      if (output_path.empty()) {
        std::cout << csv_join(header) << '\n';
        for (const auto& row : rows) std::cout << csv_join(row) << '\n';
      } else {
        write_csv_file(output_path, header, rows);
      }
    } else if (*cmd_filter) {
      const auto comments = read_comments(input_path);
      auto provider = make_provider(cfg);
      const AnchorSet anchors =
          AnchorSet::build(cfg.anchor_phrases, *provider);
      std::filesystem::create_directories(output_dir);
      FilterOptions options;
      options.embed_batch_size = cfg.embed_batch_size;
      if (cfg.resume) {
        options.checkpoint_path =
            std::filesystem::path(output_dir) / "checkpoints" /
            "filter.jsonl";
      }
      const auto decisions =
          filter_batch(comments, cfg.normalization, cfg.lexicon, anchors,
                       cfg.thresholds, *provider, options);
      std::vector<CsvRow> rows;
      for (const auto& d : decisions) {
        if (!d.passed) continue;
        rows.push_back({d.original, d.normalized,
                        format_double(*d.similarity),
                        std::to_string(d.word_count)});
      }
      write_csv_file(std::filesystem::path(output_dir) /
                         "loose_qoe_candidates_cleaned.csv",
                     {"original_comment", "normalized_comment", "similarity",
                      "word_count"},
                     rows);
      std::cout << rows.size() << " of " << comments.size()
                << " comments kept\n";
    } else if (*cmd_score) {
      const auto comments = read_comments(input_path);
      const auto backend = make_backend(cfg.scoring_backend, cfg.backend);
      std::filesystem::create_directories(output_dir);
      ScoreOptions options;
      if (cfg.resume) {
        options.checkpoint_path =
            std::filesystem::path(output_dir) / "checkpoints" /
            "scores.jsonl";
      }
      options.progress = [](std::size_t done, std::size_t total) {
        if (done % 100 == 0 || done == total) {
          std::cerr << "scored " << done << "/" << total << '\n';
        }
      };
      const auto batch = score_batch(*backend, cfg.prompt, comments,
                                     cfg.backend, options);
      write_scoring_outputs(batch, comments.size(), output_dir);
      std::cout << batch.valid().size() << " valid, "
                << batch.excluded().size() << " excluded\n";
    } else if (*cmd_enrich) {
      const auto scored = read_scored_csv(input_path);
      auto records = enrich(scored, cfg.simulation);
      if (cfg.outage) inject_outage(records, *cfg.outage);
      std::vector<CsvRow> rows;
      rows.reserve(records.size());
      for (const auto& record : records) {
        rows.push_back({record.isp, format_instant(record.timestamp),
                        record.original_comment,
                        std::to_string(record.mos)});
      }
      write_csv_file(output_path,
                     {"isp", "timestamp", "original_comment", "mos"}, rows);
      std::cout << records.size() << " records enriched\n";
    } else if (*cmd_aggregate) {
      const auto records = read_enriched_csv(input_path);
      const auto aggs = aggregate(records, cfg.window_width);
      const auto globals = global_mos(aggs);
      const auto deltas = delta_mos(aggs, globals);
      std::filesystem::create_directories(output_dir);
      write_aggregation_outputs(aggs, globals, deltas, output_dir);
      std::cout << aggs.size() << " window/isp cells over " << globals.size()
                << " windows\n";
    } else if (*cmd_detect) {
      const auto deltas = read_deltas_csv(input_path, cfg.window_width);
      const auto episodes = detect_episodes(deltas, cfg.detection);
      write_episodes_csv(episodes, output_path);
      std::cout << episodes.size() << " episodes\n";
    } else if (*cmd_report) {
      const auto aggs = read_aggregates_csv(aggregates_path, cfg.window_width);
      const auto globals = global_mos(aggs);
      const auto deltas = delta_mos(aggs, globals);
      const auto episodes =
          episodes_path.empty()
              ? detect_episodes(deltas, cfg.detection)
              : read_episodes_csv(episodes_path, cfg.window_width);
      std::vector<std::string> known = cfg.simulation.isps;
      for (const auto& agg : aggs) {
        if (std::find(known.begin(), known.end(), agg.isp) == known.end()) {
          known.push_back(agg.isp);
        }
      }
      const auto reports_dir = std::filesystem::path(output_dir) / "reports";
      std::filesystem::create_directories(reports_dir);
      for (const auto& isp : known) {
        const auto report =
            operator_report(isp, known, aggs, globals, episodes);
        std::ofstream out(reports_dir /
                          (sanitize_filename_part(isp) + ".json"));
        out << report_to_json(report).dump(2) << '\n';
      }
      emit_plot_series(globals, deltas,
                       std::filesystem::path(output_dir) / "plots",
                       cfg.detection.threshold);
      std::cout << known.size() << " reports written\n";
    } else if (*cmd_pipeline) {
      if (!input_path.empty()) cfg.input = input_path;
      if (!output_dir.empty()) cfg.output_dir = output_dir;
      const PipelineResult result = run_pipeline(cfg);
      std::cout << "input comments:  " << result.input_comments << '\n'
                << "filter passed:   " << result.filter_passed << '\n'
                << "valid scores:    " << result.stats.valid << '\n'
                << "excluded:        " << result.stats.excluded << '\n'
                << "window cells:    " << result.aggregates.size() << '\n'
                << "alert episodes:  " << result.episodes.size() << '\n'
                << "artifacts in:    " << cfg.output_dir.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
