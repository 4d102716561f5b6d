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

#ifndef CHATMOS_TIME_UTILS_HPP_
#define CHATMOS_TIME_UTILS_HPP_

#include <chrono>
#include <string>
#include <string_view>

namespace chatmos {

/// All timestamps in the pipeline are UTC instants at second precision.
using Instant = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

/// Parses "YYYY-MM-DDTHH:MM:SS" (a space instead of 'T' is accepted).
/// Throws std::invalid_argument on malformed input or out-of-range fields.
Instant parse_instant(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SS".
std::string format_instant(Instant t);

}  // namespace chatmos

#endif  // CHATMOS_TIME_UTILS_HPP_
