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

#include "chatmos/enrich.hpp"

#include <random>
#include <set>

#include "chatmos/errors.hpp"

namespace chatmos {

namespace {

// Unbiased index in [0, bound) from a 64-bit engine. Draws above the
// largest multiple of bound are rejected instead of folded in.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t n = bound;
  const std::uint64_t reject_below = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t draw = rng();
    if (draw >= reject_below) return static_cast<std::size_t>(draw % n);
  }
}

}  // namespace

Instant SimulationConfig::default_base_time() {
  using namespace std::chrono;
  return sys_days{year{2024} / 1 / 1} + hours{12};
}

void SimulationConfig::validate() const {
  if (isps.empty()) {
    throw ConfigError("simulation: isps list is empty");
  }
  std::set<std::string> seen;
  for (const auto& isp : isps) {
    if (isp.empty()) {
      throw ConfigError("simulation: isp name is empty");
    }
    if (!seen.insert(isp).second) {
      throw ConfigError("simulation: duplicate isp name: " + isp);
    }
  }
  if (step <= Seconds::zero()) {
    throw ConfigError("simulation: step must be positive");
  }
}

void OutageSpec::validate() const {
  if (target_isp.empty()) {
    throw ConfigError("outage: target_isp is empty");
  }
  if (end < start) {
    throw ConfigError("outage: end precedes start");
  }
  if (forced_mos < 1 || forced_mos > 5) {
    throw ConfigError("outage: forced_mos must lie in [1, 5]");
  }
}

std::vector<ScoredComment> drop_invalid(const std::vector<ScoredComment>& in) {
  std::vector<ScoredComment> out;
  out.reserve(in.size());
  for (const auto& row : in) {
    if (row.valid()) out.push_back(row);
  }
  return out;
}

std::vector<std::string> assign_isps(std::size_t count,
                                     const SimulationConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(config.isps[uniform_index(rng, config.isps.size())]);
  }
  return out;
}

std::vector<Instant> gen_timestamps(std::size_t count,
                                    const SimulationConfig& config) {
  config.validate();
  std::vector<Instant> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(config.base_time +
                  Seconds{static_cast<std::int64_t>(i) * config.step.count()});
  }
  return out;
}

std::vector<EnrichedRecord> enrich(const std::vector<ScoredComment>& scored,
                                   const SimulationConfig& config) {
  config.validate();
  const auto kept = drop_invalid(scored);
  const auto isps = assign_isps(kept.size(), config);
  const auto times = gen_timestamps(kept.size(), config);
  std::vector<EnrichedRecord> out;
  out.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    out.push_back(
        {isps[i], times[i], kept[i].comment(), kept[i].mos()});
  }
  return out;
}

std::size_t inject_outage(std::vector<EnrichedRecord>& records,
                          const OutageSpec& outage) {
  outage.validate();
  std::size_t touched = 0;
  for (auto& record : records) {
    if (record.isp == outage.target_isp && record.timestamp >= outage.start &&
        record.timestamp <= outage.end) {
      record.mos = outage.forced_mos;
      ++touched;
    }
  }
  return touched;
}

}  // namespace chatmos
