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

#ifndef CHATMOS_ENRICH_HPP_
#define CHATMOS_ENRICH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "chatmos/scoring.hpp"
#include "chatmos/time_utils.hpp"

namespace chatmos {

/// Controls the simulated provenance attached to scored comments. The same
/// seed and ISP list always yield the same assignment.
struct SimulationConfig {
  std::vector<std::string> isps = {"ISP1", "ISP2", "ISP3"};
  std::uint64_t seed = 42;
  Instant base_time = default_base_time();
  Seconds step = Seconds{3};

  static Instant default_base_time();
  void validate() const;
};

struct EnrichedRecord {
  std::string isp;
  Instant timestamp;
  std::string original_comment;
  int mos = 0;
};

/// Forces every record of target_isp inside [start, end] (closed) to
/// forced_mos, mimicking a degradation in that provider's footprint.
struct OutageSpec {
  std::string target_isp;
  Instant start{};
  Instant end{};
  int forced_mos = 1;

  void validate() const;
};

/// Keeps only rows rated 1..5.
std::vector<ScoredComment> drop_invalid(const std::vector<ScoredComment>& in);

/// Uniform ISP draw per row, seeded; rejection sampling keeps the draw
/// unbiased for any list size.
std::vector<std::string> assign_isps(std::size_t count,
                                     const SimulationConfig& config);

/// timestamps[i] = base_time + i * step, exact integer arithmetic.
std::vector<Instant> gen_timestamps(std::size_t count,
                                    const SimulationConfig& config);

/// drop_invalid, then ISP + timestamp assignment over the surviving rows.
std::vector<EnrichedRecord> enrich(const std::vector<ScoredComment>& scored,
                                   const SimulationConfig& config);

/// Returns how many records were rewritten.
std::size_t inject_outage(std::vector<EnrichedRecord>& records,
                          const OutageSpec& outage);

}  // namespace chatmos

#endif  // CHATMOS_ENRICH_HPP_
