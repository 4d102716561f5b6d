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

#include "chatmos/time_utils.hpp"

#include <cstdio>
#include <stdexcept>

namespace chatmos {

using std::chrono::day;
using std::chrono::hours;
using std::chrono::minutes;
using std::chrono::month;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day;

Instant parse_instant(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  std::string buf(text);
  int n = std::sscanf(buf.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d", &y, &mo, &d,
                      &sep, &h, &mi, &s);
  if (n != 7 || (sep != 'T' && sep != ' ')) {
    throw std::invalid_argument("bad timestamp: '" + buf + "'");
  }
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59) {
    throw std::invalid_argument("out-of-range timestamp: '" + buf + "'");
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + Seconds{s};
}

std::string format_instant(Instant t) {
  const sys_days date = std::chrono::floor<std::chrono::days>(t);
  const year_month_day ymd{date};
  Seconds tod = t - date;
  const auto h = std::chrono::duration_cast<hours>(tod);
  tod -= h;
  const auto mi = std::chrono::duration_cast<minutes>(tod);
  tod -= mi;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lld",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<long long>(h.count()),
                static_cast<long long>(mi.count()),
                static_cast<long long>(tod.count()));
  return buf;
}

}  // namespace chatmos
