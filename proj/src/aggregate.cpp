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

#include "chatmos/aggregate.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "chatmos/errors.hpp"

namespace chatmos {

Instant floor_window(Instant t, Seconds width) {
  if (width <= Seconds::zero()) {
    throw std::invalid_argument("window width must be positive");
  }
  const std::int64_t ticks = t.time_since_epoch().count();
  const std::int64_t w = width.count();
  std::int64_t q = ticks / w;
  if (ticks % w != 0 && ticks < 0) --q;
  return Instant{Seconds{q * w}};
}

std::vector<WindowAggregate> aggregate(
    const std::vector<EnrichedRecord>& records, Seconds width) {
  if (width <= Seconds::zero()) {
    throw std::invalid_argument("window width must be positive");
  }
  std::map<std::pair<WindowKey, std::string>,
           std::pair<std::int64_t, std::int64_t>>
      cells;  // (count, mos_sum)
  for (const auto& record : records) {
    if (record.mos < 1 || record.mos > 5) {
      throw std::invalid_argument("aggregate: record mos outside [1, 5]");
    }
    const WindowKey key{floor_window(record.timestamp, width), width};
    auto& cell = cells[{key, record.isp}];
    cell.first += 1;
    cell.second += record.mos;
  }
  std::vector<WindowAggregate> out;
  out.reserve(cells.size());
  for (const auto& [key, cell] : cells) {
    WindowAggregate agg;
    agg.window = key.first;
    agg.isp = key.second;
    agg.comment_count = cell.first;
    agg.mos_sum = cell.second;
    agg.avg_mos = static_cast<double>(cell.second) /
                  static_cast<double>(cell.first);
    out.push_back(std::move(agg));
  }
  return out;
}

std::vector<GlobalPoint> global_mos(const std::vector<WindowAggregate>& aggs) {
  std::map<WindowKey, std::pair<double, int>> sums;  // (sum of averages, n)
  for (const auto& agg : aggs) {
    auto& cell = sums[agg.window];
    cell.first += agg.avg_mos;
    cell.second += 1;
  }
  std::vector<GlobalPoint> out;
  out.reserve(sums.size());
  for (const auto& [window, cell] : sums) {
    out.push_back({window, cell.first / cell.second, cell.second});
  }
  return out;
}

std::vector<DeltaPoint> delta_mos(const std::vector<WindowAggregate>& aggs,
                                  const std::vector<GlobalPoint>& globals) {
  std::map<WindowKey, double> global_by_window;
  for (const auto& point : globals) {
    global_by_window[point.window] = point.global_mos;
  }
  std::vector<DeltaPoint> out;
  out.reserve(aggs.size());
  for (const auto& agg : aggs) {
    const auto it = global_by_window.find(agg.window);
    if (it == global_by_window.end()) {
      throw std::invalid_argument("delta_mos: window " +
                                  format_instant(agg.window.start) +
                                  " has no global entry");
    }
    out.push_back({agg.window, agg.isp, agg.avg_mos - it->second});
  }
  std::sort(out.begin(), out.end(), [](const DeltaPoint& a,
                                       const DeltaPoint& b) {
    if (a.window != b.window) return a.window < b.window;
    return a.isp < b.isp;
  });
  return out;
}

void DetectionConfig::validate() const {
  if (min_run < 1) {
    throw ConfigError("detection: min_run must be >= 1");
  }
}

std::vector<Episode> detect_episodes(const std::vector<DeltaPoint>& deltas,
                                     const DetectionConfig& config) {
  config.validate();
  std::map<std::string, std::vector<DeltaPoint>> by_isp;
  for (const auto& point : deltas) {
    by_isp[point.isp].push_back(point);
  }
  std::vector<Episode> out;
  for (auto& [isp, points] : by_isp) {
    std::sort(points.begin(), points.end(),
              [](const DeltaPoint& a, const DeltaPoint& b) {
                return a.window < b.window;
              });
    std::optional<Episode> open;
    auto close = [&] {
      if (open && open->length >= config.min_run) out.push_back(*open);
      open.reset();
    };
    for (const auto& point : points) {
      const bool flagged = point.delta < config.threshold;
      const bool contiguous =
          open && point.window.width == open->last_window.width &&
          point.window.start ==
              open->last_window.start + open->last_window.width;
      if (!contiguous) close();
      if (!flagged) {
        close();
        continue;
      }
      if (open) {
        open->last_window = point.window;
        open->length += 1;
        open->min_delta = std::min(open->min_delta, point.delta);
      } else {
        open = Episode{isp, point.window, point.window, 1, point.delta};
      }
    }
    close();
  }
  std::sort(out.begin(), out.end(), [](const Episode& a, const Episode& b) {
    if (a.isp != b.isp) return a.isp < b.isp;
    return a.first_window < b.first_window;
  });
  return out;
}

std::vector<DiscrepancyPoint> compare_objective(
    const std::vector<WindowAggregate>& subjective,
    const std::vector<ObjectivePoint>& objective) {
  std::optional<Seconds> width;
  auto check_width = [&](Seconds w) {
    if (!width) {
      width = w;
    } else if (*width != w) {
      throw std::invalid_argument(
          "compare_objective: mixed window widths in input series");
    }
  };
  std::map<std::pair<WindowKey, std::string>, DiscrepancyPoint> cells;
  for (const auto& agg : subjective) {
    check_width(agg.window.width);
    auto& cell = cells[{agg.window, agg.isp}];
    cell.window = agg.window;
    cell.isp = agg.isp;
    cell.subjective = agg.avg_mos;
  }
  for (const auto& point : objective) {
    check_width(point.window.width);
    auto& cell = cells[{point.window, point.isp}];
    cell.window = point.window;
    cell.isp = point.isp;
    cell.objective = point.mos;
  }
  std::vector<DiscrepancyPoint> out;
  out.reserve(cells.size());
  for (auto& [key, cell] : cells) {
    if (cell.subjective && cell.objective) {
      cell.discrepancy = *cell.subjective - *cell.objective;
    }
    out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace chatmos
