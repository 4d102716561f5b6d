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

#ifndef CHATMOS_PIPELINE_HPP_
#define CHATMOS_PIPELINE_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chatmos/aggregate.hpp"
#include "chatmos/enrich.hpp"
#include "chatmos/filter.hpp"
#include "chatmos/report.hpp"
#include "chatmos/scoring.hpp"

namespace chatmos {

/// Full end-to-end configuration. Every field has a usable default except
/// input and output_dir.
struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir;
  bool resume = true;

  NormalizationConfig normalization = NormalizationConfig::defaults();
  Lexicon lexicon = Lexicon::defaults();
  std::vector<std::string> anchor_phrases = AnchorSet::default_phrases();

  FilterThresholds thresholds;
  std::size_t embed_batch_size = 64;
  std::string embedding_provider = "stub";  // "stub" or "remote"
  std::size_t embedding_dimension = 384;

  std::string scoring_backend = "stub";  // "stub" or "remote"
  BackendConfig backend;
  ScoringPrompt prompt = ScoringPrompt::defaults();

  SimulationConfig simulation;
  std::optional<OutageSpec> outage;

  Seconds window_width{300};
  DetectionConfig detection;
  std::optional<std::filesystem::path> objective_series;

  /// Relative paths inside the document resolve against base_dir.
  static PipelineConfig from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir);
  static PipelineConfig from_file(const std::filesystem::path& path);
  /// Full check including input/output paths.
  void validate() const;
  /// Everything except the paths, so a config file can carry shared
  /// settings for single-stage runs.
  void validate_settings() const;
};

struct PipelineResult {
  DatasetStats stats;
  std::size_t input_comments = 0;
  std::size_t filter_passed = 0;
  std::size_t outage_rows_touched = 0;
  std::vector<WindowAggregate> aggregates;
  std::vector<GlobalPoint> globals;
  std::vector<DeltaPoint> deltas;
  std::vector<Episode> episodes;
  /// Artifact name ("scored_comments", "stats", ...) to written path.
  std::map<std::string, std::filesystem::path> artifacts;
};

/// Runs filter -> scoring -> enrichment -> aggregation -> detection ->
/// reporting and writes all artifacts under config.output_dir. Stage
/// failures surface as PipelineError naming the stage; a missing or
/// unreadable input is a ConfigError raised before anything is written.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Reads the input comment list: a .csv with an "original_comment" column
/// ("comment" accepted as a fallback), or any other extension as plain
/// text with one comment per line.
std::vector<std::string> read_comments(const std::filesystem::path& path);

}  // namespace chatmos

#endif  // CHATMOS_PIPELINE_HPP_
