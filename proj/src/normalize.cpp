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

#include "chatmos/normalize.hpp"

#include <cstdint>
#include <sstream>
#include <vector>

#include "chatmos/errors.hpp"

namespace chatmos {
namespace {

// Decodes one UTF-8 sequence starting at text[i]; advances i. Invalid bytes
// decode as U+FFFD so they fall into the symbol-strip class.
char32_t decode_utf8(std::string_view text, std::size_t& i) {
  const auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(text[k]);
  };
  unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + len > text.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    unsigned char b = byte(i + k);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_ascii_punct(char32_t cp) {
  return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
         (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

// Symbol/pictograph blocks stripped by default: general punctuation,
// arrows/math/misc symbols, dingbats, CJK punctuation, variation
// selectors, and the emoji planes. U+FFFD (decode errors) included.
bool is_symbol_or_emoji(char32_t cp) {
  return (cp >= 0x00A1 && cp <= 0x00BF) || (cp >= 0x2000 && cp <= 0x206F) ||
         (cp >= 0x2190 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F) ||
         (cp >= 0xFE00 && cp <= 0xFE0F) || cp == 0xFFFD ||
         (cp >= 0x1F000 && cp <= 0x1FBFF);
}

bool is_space_cp(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0x00A0;
}

bool is_apostrophe(char32_t cp) { return cp == '\'' || cp == 0x2019; }

bool is_ascii_letter(char32_t cp) { return cp >= 'a' && cp <= 'z'; }

std::vector<std::string> split_tokens(std::string_view text) {
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

// Runs every phase except the typo substitution; used both by
// normalize_text and by validate() to check table entries are clean.
std::string clean_pass(std::string_view raw, const NormalizationConfig& cfg) {
  std::vector<char32_t> cps;
  cps.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) cps.push_back(decode_utf8(raw, i));

  // Lowercase (ASCII), then map strip classes to spaces. Apostrophes are
  // removed outright so contractions stay one token ("don't" -> "dont").
  std::vector<char32_t> kept;
  kept.reserve(cps.size());
  for (char32_t cp : cps) {
    if (cp >= 'A' && cp <= 'Z') cp = cp - 'A' + 'a';
    if (is_apostrophe(cp)) continue;
    if (is_space_cp(cp)) {
      kept.push_back(' ');
    } else if ((cfg.strip_punctuation && is_ascii_punct(cp)) ||
               (cfg.strip_symbols && is_symbol_or_emoji(cp))) {
      kept.push_back(' ');
    } else {
      kept.push_back(cp);
    }
  }

  // Collapse runs of >= collapse_run_length identical letters to one.
  std::vector<char32_t> collapsed;
  collapsed.reserve(kept.size());
  for (std::size_t k = 0; k < kept.size();) {
    std::size_t run = 1;
    while (k + run < kept.size() && kept[k + run] == kept[k]) ++run;
    std::size_t emit = run;
    if (is_ascii_letter(kept[k]) &&
        run >= static_cast<std::size_t>(cfg.collapse_run_length)) {
      emit = 1;
    }
    for (std::size_t e = 0; e < emit; ++e) collapsed.push_back(kept[k]);
    k += run;
  }

  // Whitespace normalization + trim.
  std::string out;
  out.reserve(collapsed.size());
  bool pending_space = false;
  for (char32_t cp : collapsed) {
    if (cp == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    encode_utf8(cp, out);
  }

  if (cfg.emote_denylist.empty()) return out;
  std::string filtered;
  for (const auto& token : split_tokens(out)) {
    if (cfg.emote_denylist.count(token)) continue;
    if (!filtered.empty()) filtered += ' ';
    filtered += token;
  }
  return filtered;
}

}  // namespace

NormalizationConfig NormalizationConfig::defaults() {
  NormalizationConfig cfg;
  // Exaggeration collapse eats one letter of legitimate double-letter words
  // ("buffffering" -> "bufering"); the table restores those, and covers
  // doubled-letter typos the >=3 collapse cannot see.
  cfg.typo_table = {
      {"scuffedd", "scuffed"}, {"laag", "lag"},
      {"lagg", "lag"},         {"lagy", "laggy"},
      {"buf", "buffer"},       {"bufering", "buffering"},
      {"bufer", "buffer"},
      {"stuter", "stutter"},   {"stutering", "stuttering"},
      {"frezing", "freezing"}, {"freze", "freeze"},
      {"conection", "connection"}, {"disconect", "disconnect"},
      {"disconected", "disconnected"},
  };
  return cfg;
}

void NormalizationConfig::validate() const {
  if (collapse_run_length < 2) {
    throw ConfigError("collapse_run_length must be >= 2");
  }
  NormalizationConfig bare = *this;
  bare.typo_table.clear();
  for (const auto& [key, value] : typo_table) {
    if (key.empty() || value.empty()) {
      throw ConfigError("typo_table entries must be non-empty");
    }
    if (key.find(' ') != std::string::npos ||
        value.find(' ') != std::string::npos) {
      throw ConfigError("typo_table entries must be single tokens: '" + key +
                        "'");
    }
    if (clean_pass(key, bare) != key) {
      throw ConfigError("typo_table key not normalized: '" + key + "'");
    }
    if (clean_pass(value, bare) != value) {
      throw ConfigError("typo_table value not normalized: '" + value + "'");
    }
    if (typo_table.count(value)) {
      throw ConfigError("typo_table value '" + value +
                        "' is itself a key (substitution chain)");
    }
  }
  for (const auto& emote : emote_denylist) {
    if (emote.empty() || emote.find(' ') != std::string::npos) {
      throw ConfigError("emote_denylist entries must be single tokens");
    }
  }
}

std::string normalize_text(std::string_view raw,
                           const NormalizationConfig& cfg) {
  std::string cleaned = clean_pass(raw, cfg);
  if (cfg.typo_table.empty()) return cleaned;
  std::string out;
  out.reserve(cleaned.size());
  for (const auto& token : split_tokens(cleaned)) {
    auto it = cfg.typo_table.find(token);
    if (!out.empty()) out += ' ';
    out += (it != cfg.typo_table.end()) ? it->second : token;
  }
  return out;
}

int word_count(std::string_view normalized) {
  int count = 0;
  bool in_token = false;
  for (char c : normalized) {
    bool space = (c == ' ' || c == '\t' || c == '\n' || c == '\r');
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

}  // namespace chatmos
