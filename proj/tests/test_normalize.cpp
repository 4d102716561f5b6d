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

#include <random>
#include <string>

#include <doctest.h>

#include "chatmos/errors.hpp"

using namespace chatmos;

namespace {
const NormalizationConfig kCfg = NormalizationConfig::defaults();
}

TEST_CASE("streaming slang typos normalize to canonical tokens") {
  CHECK(normalize_text("laaag", kCfg) == "lag");
  CHECK(normalize_text("laag", kCfg) == "lag");
  CHECK(normalize_text("scuffedd", kCfg) == "scuffed");
  CHECK(normalize_text("KEKW", kCfg) == "kekw");
  CHECK(normalize_text("buffffering", kCfg) == "buffering");
}

TEST_CASE("lowercasing and punctuation stripping") {
  CHECK(normalize_text("Perfect stream quality today, no buffering at all!",
                       kCfg) ==
        "perfect stream quality today no buffering at all");
  CHECK(normalize_text("WHY. IS. THIS. LAGGING???", kCfg) ==
        "why is this lagging");
}

TEST_CASE("apostrophes are removed, not turned into spaces") {
  CHECK(normalize_text("won't load", kCfg) == "wont load");
  CHECK(normalize_text("can\xE2\x80\x99t connect", kCfg) == "cant connect");
}

TEST_CASE("emoji and symbols are stripped") {
  CHECK(normalize_text("stream \xF0\x9F\x94\xA5\xF0\x9F\x94\xA5", kCfg) ==
        "stream");
  CHECK(normalize_text("lag \xE2\x86\x92 bad", kCfg) == "lag bad");
}

TEST_CASE("letter runs collapse only at three or more") {
  CHECK(normalize_text("soo", kCfg) == "soo");
  CHECK(normalize_text("soooo", kCfg) == "so");
  CHECK(normalize_text("nooooooo", kCfg) == "no");
}

TEST_CASE("whitespace collapses and trims") {
  CHECK(normalize_text("  lots   of \t space \n", kCfg) == "lots of space");
  CHECK(normalize_text("", kCfg) == "");
  CHECK(normalize_text("!!!", kCfg) == "");
}

TEST_CASE("emote denylist removes whole tokens only") {
  NormalizationConfig cfg = kCfg;
  cfg.emote_denylist = {"kekw"};
  CHECK(normalize_text("kekw lag", cfg) == "lag");
  CHECK(normalize_text("kekws", cfg) == "kekws");
}

TEST_CASE("invalid UTF-8 bytes are dropped") {
  CHECK(normalize_text("lag\xFF\xFE", kCfg) == "lag");
}

TEST_CASE("word_count") {
  CHECK(word_count("") == 0);
  CHECK(word_count("one") == 1);
  CHECK(word_count("twitch lagging or sum") == 4);
}

TEST_CASE("normalize_text is idempotent") {
  const char* samples[] = {
      "laaag",
      "scuffedd",
      "Perfect stream quality today, no buffering at all!",
      "won't   load \xF0\x9F\x94\xA5",
      "KEKW KEKW KEKW",
      "buffffering on twitch \xE2\x80\x94 again",
      "\xFF broken \xFE bytes",
  };
  for (const char* s : samples) {
    const std::string once = normalize_text(s, kCfg);
    CHECK(normalize_text(once, kCfg) == once);
  }

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> byte(1, 255);
  std::uniform_int_distribution<int> len(0, 40);
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) s += static_cast<char>(byte(rng));
    const std::string once = normalize_text(s, kCfg);
    CHECK(normalize_text(once, kCfg) == once);
  }
}

TEST_CASE("defaults validate") {
  CHECK_NOTHROW(kCfg.validate());
}

TEST_CASE("validate rejects broken configs") {
  NormalizationConfig cfg = kCfg;
  cfg.collapse_run_length = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = kCfg;
  cfg.typo_table["two words"] = "x";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = kCfg;
  cfg.typo_table["Lag!"] = "lag";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = kCfg;  // value is itself a key: substitution would chain
  cfg.typo_table["abcd"] = "efgh";
  cfg.typo_table["efgh"] = "ijkl";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = kCfg;
  cfg.emote_denylist = {"two words"};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
