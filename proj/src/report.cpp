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

#include "chatmos/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "chatmos/csv.hpp"
#include "chatmos/errors.hpp"
#include "chatmos/time_utils.hpp"

namespace chatmos {

DatasetStats dataset_stats(const std::vector<ScoreRow>& rows) {
  DatasetStats stats;
  stats.total = static_cast<std::int64_t>(rows.size());
  for (const auto& row : rows) {
    const int effective = row.scored ? row.mos : -1;
    stats.histogram[effective] += 1;
    if (effective >= 1) {
      stats.valid += 1;
    }
  }
  stats.excluded = stats.total - stats.valid;
  return stats;
}

DatasetStats dataset_stats(const std::vector<ScoredComment>& scored) {
  DatasetStats stats;
  stats.total = static_cast<std::int64_t>(scored.size());
  for (const auto& row : scored) {
    stats.histogram[row.mos()] += 1;
    if (row.valid()) stats.valid += 1;
  }
  stats.excluded = stats.total - stats.valid;
  return stats;
}

OperatorReport operator_report(const std::string& isp,
                               const std::vector<std::string>& known_isps,
                               const std::vector<WindowAggregate>& aggs,
                               const std::vector<GlobalPoint>& globals,
                               const std::vector<Episode>& episodes) {
  if (std::find(known_isps.begin(), known_isps.end(), isp) ==
      known_isps.end()) {
    throw ConfigError("report: unknown isp: " + isp);
  }
  std::map<WindowKey, double> global_by_window;
  for (const auto& point : globals) {
    global_by_window[point.window] = point.global_mos;
  }
  OperatorReport report;
  report.isp = isp;
  for (const auto& agg : aggs) {
    if (agg.isp != isp) continue;
    const auto it = global_by_window.find(agg.window);
    if (it == global_by_window.end()) {
      throw PipelineError("report: window " +
                          format_instant(agg.window.start) +
                          " has no global entry");
    }
    OperatorReportRow row;
    row.window = agg.window;
    row.local_avg_mos = agg.avg_mos;
    row.comment_count = agg.comment_count;
    row.global_mos = it->second;
    row.delta_mos = agg.avg_mos - it->second;
    report.rows.push_back(row);
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const OperatorReportRow& a, const OperatorReportRow& b) {
              return a.window < b.window;
            });
  for (const auto& episode : episodes) {
    if (episode.isp == isp) report.episodes.push_back(episode);
  }
  if (!report.rows.empty()) {
    report.period = {report.rows.front().window.start,
                     report.rows.back().window.start +
                         report.rows.back().window.width};
  }
  return report;
}

nlohmann::json report_to_json(const OperatorReport& report) {
  nlohmann::json doc;
  doc["isp"] = report.isp;
  if (report.period) {
    doc["period"] = {{"start", format_instant(report.period->first)},
                     {"end", format_instant(report.period->second)}};
  } else {
    doc["period"] = nullptr;
  }
  doc["windows"] = nlohmann::json::array();
  for (const auto& row : report.rows) {
    doc["windows"].push_back({
        {"time_window", format_instant(row.window.start)},
        {"window_seconds", row.window.width.count()},
        {"avg_mos", row.local_avg_mos},
        {"comment_count", row.comment_count},
        {"global_mos", row.global_mos},
        {"delta_mos", row.delta_mos},
    });
  }
  doc["episodes"] = nlohmann::json::array();
  for (const auto& episode : report.episodes) {
    doc["episodes"].push_back({
        {"first_window", format_instant(episode.first_window.start)},
        {"last_window", format_instant(episode.last_window.start)},
        {"window_seconds", episode.first_window.width.count()},
        {"length", episode.length},
        {"min_delta", episode.min_delta},
    });
  }
  return doc;
}

nlohmann::json stats_to_json(const DatasetStats& stats) {
  nlohmann::json doc;
  doc["total_comments"] = stats.total;
  doc["valid_comments"] = stats.valid;
  doc["excluded_comments"] = stats.excluded;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [mos, count] : stats.histogram) {
    hist[std::to_string(mos)] = count;
  }
  doc["mos_histogram"] = hist;
  return doc;
}

std::string sanitize_filename_part(const std::string& raw) {
  std::string out = raw;
  for (char& c : out) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '-';
    if (!ok) c = '_';
  }
  return out;
}

std::vector<std::filesystem::path> emit_plot_series(
    const std::vector<GlobalPoint>& globals,
    const std::vector<DeltaPoint>& deltas,
    const std::filesystem::path& out_dir, double threshold) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;

  std::vector<CsvRow> global_rows;
  global_rows.reserve(globals.size());
  for (const auto& point : globals) {
    global_rows.push_back({format_instant(point.window.start),
                           format_double(point.global_mos),
                           std::to_string(point.isp_count)});
  }
  const auto global_path = out_dir / "global_mos.csv";
  write_csv_file(global_path, {"time_window", "global_mos", "isp_count"},
                 global_rows);
  written.push_back(global_path);

  std::map<std::string, std::vector<const DeltaPoint*>> by_isp;
  for (const auto& point : deltas) by_isp[point.isp].push_back(&point);

  nlohmann::json manifest;
  manifest["series"] = nlohmann::json::array();
  manifest["series"].push_back({{"kind", "global_mos"},
                                {"file", "global_mos.csv"}});
  for (auto& [isp, points] : by_isp) {
    std::sort(points.begin(), points.end(),
              [](const DeltaPoint* a, const DeltaPoint* b) {
                return a->window < b->window;
              });
    std::vector<CsvRow> rows;
    rows.reserve(points.size());
    for (const DeltaPoint* point : points) {
      rows.push_back({format_instant(point->window.start),
                      format_double(point->delta)});
    }
    const std::string file =
        "delta_mos_" + sanitize_filename_part(isp) + ".csv";
    const auto path = out_dir / file;
    write_csv_file(path, {"time_window", "delta_mos"}, rows);
    written.push_back(path);
    manifest["series"].push_back({{"kind", "delta_mos"},
                                  {"isp", isp},
                                  {"file", file},
                                  {"zero_line", 0.0},
                                  {"threshold", threshold}});
  }

  const auto manifest_path = out_dir / "series_manifest.json";
  std::ofstream out(manifest_path);
  if (!out.is_open()) {
    throw PipelineError("report: cannot write " + manifest_path.string());
  }
  out << manifest.dump(2) << '\n';
  written.push_back(manifest_path);
  return written;
}

}  // namespace chatmos
