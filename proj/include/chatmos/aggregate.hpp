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

#ifndef CHATMOS_AGGREGATE_HPP_
#define CHATMOS_AGGREGATE_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chatmos/enrich.hpp"
#include "chatmos/time_utils.hpp"

namespace chatmos {

/// Half-open tumbling window [start, start + width) on the epoch grid.
struct WindowKey {
  Instant start{};
  Seconds width{};

  friend auto operator<=>(const WindowKey&, const WindowKey&) = default;
};

/// Largest grid-aligned window start not after t. Floored division, so
/// pre-epoch timestamps land on the grid too.
Instant floor_window(Instant t, Seconds width);

struct WindowAggregate {
  WindowKey window;
  std::string isp;
  std::int64_t comment_count = 0;
  std::int64_t mos_sum = 0;  // integer sum, so order of input rows is moot
  double avg_mos = 0.0;
};

/// Buckets records into (window, isp) cells. Output is sorted by window
/// start, then ISP name; cells with no comments do not appear.
std::vector<WindowAggregate> aggregate(
    const std::vector<EnrichedRecord>& records, Seconds width);

struct GlobalPoint {
  WindowKey window;
  double global_mos = 0.0;
  int isp_count = 0;  // ISPs with at least one comment in the window
};

/// Unweighted mean of the per-ISP averages present in each window.
std::vector<GlobalPoint> global_mos(const std::vector<WindowAggregate>& aggs);

struct DeltaPoint {
  WindowKey window;
  std::string isp;
  double delta = 0.0;  // local average minus the window's global mean
};

/// Pairs every aggregate with its window's global mean. Throws
/// std::invalid_argument when an aggregate's window has no global entry.
std::vector<DeltaPoint> delta_mos(const std::vector<WindowAggregate>& aggs,
                                  const std::vector<GlobalPoint>& globals);

struct DetectionConfig {
  double threshold = -0.4;  // strict: delta < threshold flags the window
  int min_run = 1;          // consecutive flagged windows needed to report

  void validate() const;
};

/// Maximal run of consecutive flagged windows for one ISP. A missing grid
/// window terminates the run.
struct Episode {
  std::string isp;
  WindowKey first_window;
  WindowKey last_window;
  int length = 0;
  double min_delta = 0.0;
};

std::vector<Episode> detect_episodes(const std::vector<DeltaPoint>& deltas,
                                     const DetectionConfig& config);

struct ObjectivePoint {
  WindowKey window;
  std::string isp;
  double mos = 0.0;
};

/// Subjective vs. objective per (window, isp). Cells present on one side
/// only keep the other side empty; discrepancy = subjective - objective
/// where both exist. Throws std::invalid_argument on window width mismatch.
struct DiscrepancyPoint {
  WindowKey window;
  std::string isp;
  std::optional<double> subjective;
  std::optional<double> objective;
  std::optional<double> discrepancy;
};

std::vector<DiscrepancyPoint> compare_objective(
    const std::vector<WindowAggregate>& subjective,
    const std::vector<ObjectivePoint>& objective);

}  // namespace chatmos

#endif  // CHATMOS_AGGREGATE_HPP_
