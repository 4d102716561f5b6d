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

#ifndef CHATMOS_DETAIL_FNV_HPP_
#define CHATMOS_DETAIL_FNV_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace chatmos::detail {

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t seed = kFnvOffset) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

/// Accumulates one field into a running fingerprint. The trailing separator
/// byte keeps {"ab","c"} and {"a","bc"} distinct.
inline void fnv_mix(std::uint64_t& h, std::string_view data) {
  h = fnv1a64(data, h);
  h ^= 0xFFu;
  h *= kFnvPrime;
}

inline std::string fnv_hex(std::uint64_t h) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace chatmos::detail

#endif  // CHATMOS_DETAIL_FNV_HPP_
