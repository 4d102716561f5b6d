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

#ifndef CHATMOS_NORMALIZE_HPP_
#define CHATMOS_NORMALIZE_HPP_

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace chatmos {

/// Settings for the deterministic comment-cleaning pass.
///
/// The cleaning order is fixed: lowercase, strip punctuation/symbols/emoji,
/// collapse exaggerated letter runs, normalize whitespace, drop deny-listed
/// emote tokens, then apply whole-token typo substitutions. Substitutions
/// run last so the pass is idempotent; validate() rejects tables that would
/// break that (values that are themselves keys, or not already clean).
struct NormalizationConfig {
  /// Whole-token fixes applied after collapsing, e.g. "scuffedd" -> "scuffed".
  std::map<std::string, std::string> typo_table;

  /// Runs of this many or more identical letters collapse to one.
  int collapse_run_length = 3;

  bool strip_punctuation = true;
  bool strip_symbols = true;  // emoji, pictographs, misc symbols

  /// Textual platform emotes removed as whole tokens.
  std::set<std::string> emote_denylist;

  /// Paper-derived defaults plus common doubled-letter streaming terms.
  static NormalizationConfig defaults();

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// Cleans one raw comment. Total function: any input (including empty and
/// invalid UTF-8) yields a deterministic result, and the pass is idempotent.
std::string normalize_text(std::string_view raw,
                           const NormalizationConfig& cfg);

/// Number of whitespace-delimited tokens; 0 for empty text.
int word_count(std::string_view normalized);

}  // namespace chatmos

#endif  // CHATMOS_NORMALIZE_HPP_
