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

#include "chatmos/lexicon.hpp"

#include <vector>

#include "chatmos/errors.hpp"

namespace chatmos {
namespace {

std::vector<std::string> tokens_of(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ') ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

bool phrase_matches(const std::vector<std::string>& tokens,
                    const std::string& phrase) {
  auto phrase_tokens = tokens_of(phrase);
  if (phrase_tokens.empty()) return false;
  if (phrase_tokens.size() == 1) {
    for (const auto& t : tokens) {
      if (t == phrase_tokens[0]) return true;
    }
    return false;
  }
  if (phrase_tokens.size() > tokens.size()) return false;
  for (std::size_t i = 0; i + phrase_tokens.size() <= tokens.size(); ++i) {
    bool all = true;
    for (std::size_t k = 0; k < phrase_tokens.size(); ++k) {
      if (tokens[i + k] != phrase_tokens[k]) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool any_match(const std::vector<std::string>& tokens,
               const std::set<std::string>& phrases) {
  for (const auto& phrase : phrases) {
    if (phrase_matches(tokens, phrase)) return true;
  }
  return false;
}

}  // namespace

Lexicon Lexicon::defaults() {
  Lexicon lex;
  lex.problem_keywords = {
      "buffer",       "buffering",   "buffers",      "lag",
      "laggy",        "lagging",     "lags",         "freeze",
      "freezes",      "freezing",    "froze",        "frozen",
      "stutter",
      "stuttering",   "choppy",      "pixelated",    "disconnect",
      "disconnects",  "disconnected", "disconnecting", "dc",
      "drops",        "dropping",    "scuffed",      "crash",
      "crashed",      "crashing",    "unwatchable",  "unplayable",
      "glitchy",      "glitching",   "desync",       "audio delay",
      "frame drops",  "out of sync", "keeps dying",  "wont load",
      "cant connect", "cutting out",
  };
  lex.context_keywords = {
      "stream",  "streams",  "streaming", "streamer", "twitch",
      "video",   "feed",     "network",   "ping",     "dns",
      "connection", "internet", "wifi",   "router",   "isp",
      "server",  "bitrate",  "latency",   "audio",    "quality",
      "chat",    "vod",      "broadcast",
  };
  lex.meme_keywords = {
      "kekw",   "weirdchamp", "monkaw",  "pepega",  "omegalul",
      "lul",    "lulw",       "pog",     "poggers", "pogchamp",
      "kappa",  "sadge",      "copium",  "monkas",  "jebaited",
      "5head",  "pepelaugh",
  };
  return lex;
}

void Lexicon::validate(const NormalizationConfig& cfg) const {
  const std::set<std::string>* groups[] = {&problem_keywords,
                                           &context_keywords, &meme_keywords};
  const char* names[] = {"problem", "context", "meme"};
  for (int g = 0; g < 3; ++g) {
    for (const auto& phrase : *groups[g]) {
      if (phrase.empty()) {
        throw ConfigError(std::string(names[g]) + " keywords: empty entry");
      }
      if (normalize_text(phrase, cfg) != phrase) {
        throw ConfigError(std::string(names[g]) + " keyword '" + phrase +
                          "' is not normalized under the active config");
      }
    }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      for (const auto& phrase : *groups[a]) {
        if (groups[b]->count(phrase)) {
          throw ConfigError("keyword '" + phrase + "' appears in both " +
                            names[a] + " and " + names[b] + " groups");
        }
      }
    }
  }
}

MatchFlags match_keywords(std::string_view normalized, const Lexicon& lex) {
  const auto tokens = tokens_of(normalized);
  MatchFlags flags;
  flags.has_problem = any_match(tokens, lex.problem_keywords);
  flags.has_context = any_match(tokens, lex.context_keywords);
  flags.has_meme = any_match(tokens, lex.meme_keywords);
  return flags;
}

}  // namespace chatmos
