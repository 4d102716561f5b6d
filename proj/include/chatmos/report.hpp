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

#ifndef CHATMOS_REPORT_HPP_
#define CHATMOS_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chatmos/aggregate.hpp"
#include "chatmos/scoring.hpp"

namespace chatmos {

struct DatasetStats {
  std::int64_t total = 0;
  std::int64_t valid = 0;
  std::int64_t excluded = 0;
  /// Effective rating per row (failed rows count as -1); sums to total.
  std::map<int, std::int64_t> histogram;
};

DatasetStats dataset_stats(const std::vector<ScoreRow>& rows);

/// Same statistics over an already-scored dataset (re-analysis path).
DatasetStats dataset_stats(const std::vector<ScoredComment>& scored);

struct OperatorReportRow {
  WindowKey window;
  double local_avg_mos = 0.0;
  std::int64_t comment_count = 0;
  double global_mos = 0.0;
  double delta_mos = 0.0;
};

/// Per-ISP operator view. Carries aggregates only, never comment text.
struct OperatorReport {
  std::string isp;
  std::vector<OperatorReportRow> rows;
  std::vector<Episode> episodes;
  /// [first window start, last window end); absent when rows is empty.
  std::optional<std::pair<Instant, Instant>> period;
};

/// Builds the report for one ISP. known_isps is the configured universe:
/// asking for an ISP outside it is an error, while a known ISP with no
/// traffic yields an empty report.
OperatorReport operator_report(const std::string& isp,
                               const std::vector<std::string>& known_isps,
                               const std::vector<WindowAggregate>& aggs,
                               const std::vector<GlobalPoint>& globals,
                               const std::vector<Episode>& episodes);

nlohmann::json report_to_json(const OperatorReport& report);

nlohmann::json stats_to_json(const DatasetStats& stats);

/// "ISP/1 (dev)" -> "ISP_1__dev_", safe for use inside a filename.
std::string sanitize_filename_part(const std::string& raw);

/// Writes global_mos.csv, one delta_mos_<ISP>.csv per ISP, and
/// series_manifest.json (threshold and zero-line metadata for plotting)
/// into out_dir. Returns the written paths, manifest last.
std::vector<std::filesystem::path> emit_plot_series(
    const std::vector<GlobalPoint>& globals,
    const std::vector<DeltaPoint>& deltas,
    const std::filesystem::path& out_dir, double threshold);

}  // namespace chatmos

#endif  // CHATMOS_REPORT_HPP_
