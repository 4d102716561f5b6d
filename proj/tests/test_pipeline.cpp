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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "chatmos/errors.hpp"
#include "chatmos/time_utils.hpp"

using namespace chatmos;

namespace {

const std::filesystem::path kFixtures{CHATMOS_TEST_DATA_DIR};

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

PipelineConfig fixture_config(const std::filesystem::path& out_dir) {
  PipelineConfig cfg;
  cfg.input = kFixtures / "comments_fixture.csv";
  cfg.output_dir = out_dir;
  cfg.backend.pacing_seconds = 0.0;
  return cfg;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.is_open());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("an empty json document yields the default configuration") {
  const PipelineConfig cfg =
      PipelineConfig::from_json(nlohmann::json::object(), ".");
  CHECK(cfg.resume);
  CHECK(cfg.embedding_provider == "stub");
  CHECK(cfg.scoring_backend == "stub");
  CHECK(cfg.embedding_dimension == 384);
  CHECK(cfg.window_width == Seconds{300});
  CHECK(cfg.detection.threshold == doctest::Approx(-0.4));
  CHECK(cfg.simulation.isps ==
        std::vector<std::string>{"ISP1", "ISP2", "ISP3"});
  CHECK(cfg.thresholds.min_words == 5);
  CHECK_FALSE(cfg.outage.has_value());
}

TEST_CASE("json fields land in the right config slots") {
  const nlohmann::json doc = {
      {"input", "data/comments.csv"},
      {"output_dir", "out"},
      {"resume", false},
      {"normalization", {{"collapse_run_length", 4}}},
      {"anchors", {"stream broken", "video buffering badly"}},
      {"filter",
       {{"min_words", 4},
        {"short_text_threshold", 0.5},
        {"long_text_threshold", 0.3},
        {"embed_batch_size", 16},
        {"dimension", 128}}},
      {"scoring", {{"pacing_seconds", 0.0}, {"max_retries", 5}}},
      {"simulation",
       {{"isps", {"North", "South"}},
        {"seed", 7},
        {"base_time", "2024-06-01 10:00:00"},
        {"step_seconds", 9}}},
      {"outage",
       {{"target_isp", "South"},
        {"start", "2024-06-01T10:00:00"},
        {"end", "2024-06-01T11:00:00"},
        {"forced_mos", 2}}},
      {"aggregation", {{"window_seconds", 600}}},
      {"detection", {{"threshold", -0.5}, {"min_run", 2}}},
  };
  const PipelineConfig cfg = PipelineConfig::from_json(doc, "/base");
  CHECK(cfg.input == std::filesystem::path("/base/data/comments.csv"));
  CHECK(cfg.output_dir == std::filesystem::path("/base/out"));
  CHECK_FALSE(cfg.resume);
  CHECK(cfg.normalization.collapse_run_length == 4);
  CHECK(cfg.anchor_phrases.size() == 2);
  CHECK(cfg.thresholds.min_words == 4);
  CHECK(cfg.thresholds.short_text_threshold == doctest::Approx(0.5));
  CHECK(cfg.embed_batch_size == 16);
  CHECK(cfg.embedding_dimension == 128);
  CHECK(cfg.backend.max_retries == 5);
  CHECK(cfg.simulation.isps == std::vector<std::string>{"North", "South"});
  CHECK(cfg.simulation.seed == 7);
  CHECK(format_instant(cfg.simulation.base_time) == "2024-06-01T10:00:00");
  CHECK(cfg.simulation.step == Seconds{9});
  REQUIRE(cfg.outage.has_value());
  CHECK(cfg.outage->target_isp == "South");
  CHECK(cfg.outage->forced_mos == 2);
  CHECK(cfg.window_width == Seconds{600});
  CHECK(cfg.detection.threshold == doctest::Approx(-0.5));
  CHECK(cfg.detection.min_run == 2);
}

TEST_CASE("config errors name the offending key") {
  const nlohmann::json doc = {{"filter", {{"min_words", "five"}}}};
  try {
    PipelineConfig::from_json(doc, ".");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("min_words") != std::string::npos);
  }
}

TEST_CASE("config rejects unknown component names") {
  CHECK_THROWS_AS(PipelineConfig::from_json(
                      {{"filter", {{"provider", "gpu"}}}}, "."),
                  ConfigError);
  CHECK_THROWS_AS(PipelineConfig::from_json(
                      {{"scoring", {{"backend", "llama"}}}}, "."),
                  ConfigError);
  CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::array(), "."),
                  ConfigError);
}

TEST_CASE("outage target must be a simulated isp") {
  const nlohmann::json doc = {
      {"outage",
       {{"target_isp", "Ghost"},
        {"start", "2024-01-01T12:00:00"},
        {"end", "2024-01-01T12:30:00"}}},
  };
  CHECK_THROWS_AS(PipelineConfig::from_json(doc, "."), ConfigError);
}

TEST_CASE("config file loading reports bad json") {
  const auto dir = fresh_dir("chatmos_cfg_test");
  std::filesystem::create_directories(dir);
  const auto path = dir / "broken.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(PipelineConfig::from_file(path), ConfigError);
  CHECK_THROWS_AS(PipelineConfig::from_file(dir / "absent.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("read_comments handles csv and plain text") {
  const auto dir = fresh_dir("chatmos_read_comments");
  std::filesystem::create_directories(dir);

  const auto csv_path = dir / "comments.csv";
  {
    std::ofstream out(csv_path);
    out << "original_comment\nfirst\n\"two, quoted\"\n";
  }
  auto rows = read_comments(csv_path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "first");
  CHECK(rows[1] == "two, quoted");

  const auto legacy_path = dir / "legacy.csv";
  {
    std::ofstream out(legacy_path);
    out << "comment\nold column name\n";
  }
  rows = read_comments(legacy_path);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == "old column name");

  const auto txt_path = dir / "comments.txt";
  {
    std::ofstream out(txt_path);
    out << "alpha\r\n\nbeta\n";
  }
  rows = read_comments(txt_path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "alpha");
  CHECK(rows[1] == "beta");

  CHECK_THROWS_AS(read_comments(dir / "missing.csv"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("pipeline over the fixture writes every artifact") {
  const auto out_dir = fresh_dir("chatmos_pipeline_run");
  const PipelineConfig cfg = fixture_config(out_dir);
  const PipelineResult result = run_pipeline(cfg);

  CHECK(result.input_comments == 30);
  CHECK(result.filter_passed == 13);
  CHECK(result.stats.total == 13);
  CHECK(result.stats.valid == 11);
  CHECK(result.stats.excluded == 2);
  CHECK(result.stats.valid + result.stats.excluded == result.stats.total);

  for (const char* name :
       {"loose_qoe_candidates_cleaned.csv", "scored_comments.csv",
        "excluded_comments.csv", "stats.json", "enriched_comments.csv",
        "window_aggregates.csv", "global_mos.csv", "delta_mos.csv",
        "alert_episodes.csv"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(out_dir / name));
  }
  CHECK(std::filesystem::exists(out_dir / "reports" / "ISP1.json"));
  CHECK(std::filesystem::exists(out_dir / "reports" / "ISP2.json"));
  CHECK(std::filesystem::exists(out_dir / "reports" / "ISP3.json"));
  CHECK(std::filesystem::exists(out_dir / "plots" / "global_mos.csv"));
  CHECK(std::filesystem::exists(out_dir / "plots" / "series_manifest.json"));

  // All fixture comments sit in one five-minute window.
  CHECK(result.globals.size() == 1);
  std::size_t enriched_rows = 0;
  {
    std::istringstream in(slurp(out_dir / "enriched_comments.csv"));
    std::string line;
    while (std::getline(in, line)) ++enriched_rows;
  }
  CHECK(enriched_rows == 12);  // header + 11 valid records

  // Vetoed content stays out of the candidate artifact.
  const std::string candidates =
      slurp(out_dir / "loose_qoe_candidates_cleaned.csv");
  CHECK(candidates.find("KEKW") == std::string::npos);
  CHECK(candidates.find("pizza") == std::string::npos);

  const std::string excluded = slurp(out_dir / "excluded_comments.csv");
  CHECK(excluded.find("not_experience_related") != std::string::npos);

  std::filesystem::remove_all(out_dir);
}

TEST_CASE("pipeline reruns are byte-identical") {
  const auto dir_a = fresh_dir("chatmos_pipeline_det_a");
  const auto dir_b = fresh_dir("chatmos_pipeline_det_b");
  const PipelineResult a = run_pipeline(fixture_config(dir_a));
  const PipelineResult b = run_pipeline(fixture_config(dir_b));

  REQUIRE(a.artifacts.size() == b.artifacts.size());
  for (const auto& [name, path_a] : a.artifacts) {
    CAPTURE(name);
    REQUIRE(b.artifacts.count(name) == 1);
    CHECK(slurp(path_a) == slurp(b.artifacts.at(name)));
  }
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("resumed rerun over the same directory reproduces the result") {
  const auto out_dir = fresh_dir("chatmos_pipeline_resume");
  const PipelineConfig cfg = fixture_config(out_dir);
  const PipelineResult first = run_pipeline(cfg);
  const PipelineResult second = run_pipeline(cfg);
  CHECK(first.stats.total == second.stats.total);
  CHECK(first.stats.valid == second.stats.valid);
  CHECK(first.filter_passed == second.filter_passed);
  CHECK(first.aggregates.size() == second.aggregates.size());

  PipelineConfig no_resume = cfg;
  no_resume.resume = false;
  const PipelineResult third = run_pipeline(no_resume);
  CHECK(third.stats.valid == first.stats.valid);
  std::filesystem::remove_all(out_dir);
}

TEST_CASE("missing input fails before any artifact is written") {
  const auto out_dir = fresh_dir("chatmos_pipeline_missing_input");
  PipelineConfig cfg = fixture_config(out_dir);
  cfg.input = kFixtures / "no_such_file.csv";
  CHECK_THROWS_AS(run_pipeline(cfg), ConfigError);
  CHECK_FALSE(std::filesystem::exists(out_dir));
}

TEST_CASE("an injected outage produces an alert for the target isp") {
  const auto out_dir = fresh_dir("chatmos_pipeline_outage");
  PipelineConfig cfg = fixture_config(out_dir);
  OutageSpec outage;
  outage.target_isp = "ISP2";
  outage.start = cfg.simulation.base_time;
  outage.end = cfg.simulation.base_time + Seconds{3600};
  outage.forced_mos = 1;
  cfg.outage = outage;

  const PipelineResult result = run_pipeline(cfg);
  CHECK(result.outage_rows_touched > 0);
  bool target_flagged = false;
  for (const auto& episode : result.episodes) {
    if (episode.isp == "ISP2") target_flagged = true;
  }
  CHECK(target_flagged);
  const std::string alerts = slurp(out_dir / "alert_episodes.csv");
  CHECK(alerts.find("ISP2") != std::string::npos);
  std::filesystem::remove_all(out_dir);
}

TEST_CASE("stage failures carry the stage name") {
  const auto out_dir = fresh_dir("chatmos_pipeline_stagefail");
  PipelineConfig cfg = fixture_config(out_dir);
  cfg.scoring_backend = "remote";  // no endpoint configured anywhere
  try {
    run_pipeline(cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("scoring") != std::string::npos);
  }
  std::filesystem::remove_all(out_dir);
}

TEST_CASE("objective series comparison lands in discrepancy.csv") {
  const auto out_dir = fresh_dir("chatmos_pipeline_objective");
  const auto data_dir = fresh_dir("chatmos_pipeline_objective_data");
  std::filesystem::create_directories(data_dir);
  const auto series_path = data_dir / "objective.csv";
  {
    std::ofstream out(series_path);
    out << "time_window,isp,objective_mos\n"
        << "2024-01-01T12:00:00,ISP1,4.5\n"
        << "2024-01-01T12:00:00,ISP2,3.5\n";
  }
  PipelineConfig cfg = fixture_config(out_dir);
  cfg.objective_series = series_path;
  const PipelineResult result = run_pipeline(cfg);
  REQUIRE(result.artifacts.count("discrepancy") == 1);
  const std::string csv = slurp(out_dir / "discrepancy.csv");
  CHECK(csv.find("time_window,isp,subjective_mos,objective_mos,discrepancy") ==
        0);
  CHECK(csv.find("ISP1") != std::string::npos);
  std::filesystem::remove_all(out_dir);
  std::filesystem::remove_all(data_dir);
}

TEST_CASE("misaligned objective series is a config error") {
  const auto out_dir = fresh_dir("chatmos_pipeline_objective_bad");
  const auto data_dir = fresh_dir("chatmos_pipeline_objective_bad_data");
  std::filesystem::create_directories(data_dir);
  const auto series_path = data_dir / "objective.csv";
  {
    std::ofstream out(series_path);
    out << "time_window,isp,objective_mos\n"
        << "2024-01-01T12:01:00,ISP1,4.5\n";  // off the 300s grid
  }
  PipelineConfig cfg = fixture_config(out_dir);
  cfg.objective_series = series_path;
  CHECK_THROWS_AS(run_pipeline(cfg), ConfigError);
  std::filesystem::remove_all(out_dir);
  std::filesystem::remove_all(data_dir);
}
