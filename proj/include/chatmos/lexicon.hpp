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

#ifndef CHATMOS_LEXICON_HPP_
#define CHATMOS_LEXICON_HPP_

#include <set>
#include <string>
#include <string_view>

#include "chatmos/normalize.hpp"

namespace chatmos {

/// The three keyword groups of the rule filter. Entries must be lowercase,
/// cleaned with the same NormalizationConfig as the comments, and the three
/// groups must be pairwise disjoint (validate() enforces both).
///
/// Single-word entries match on token boundaries ("flag" never matches
/// inside "flagship"); multi-word entries match as a contiguous run of
/// tokens, so whitespace differences do not matter.
struct Lexicon {
  std::set<std::string> problem_keywords;
  std::set<std::string> context_keywords;
  std::set<std::string> meme_keywords;

  /// Curated default: service/delivery problem terms, streaming/network
  /// context terms, and platform meme emotes. Fully overridable via config.
  static Lexicon defaults();

  void validate(const NormalizationConfig& cfg) const;
};

struct MatchFlags {
  bool has_problem = false;
  bool has_context = false;
  bool has_meme = false;
};

MatchFlags match_keywords(std::string_view normalized, const Lexicon& lex);

/// QoE-relevant per the rule layer: problem AND context AND NOT meme.
inline bool rule_verdict(const MatchFlags& flags) {
  return flags.has_problem && flags.has_context && !flags.has_meme;
}

}  // namespace chatmos

#endif  // CHATMOS_LEXICON_HPP_
