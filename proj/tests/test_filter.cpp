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

#include "chatmos/filter.hpp"

#include <cmath>
#include <filesystem>

#include <doctest.h>

#include "chatmos/csv.hpp"
#include "chatmos/errors.hpp"

using namespace chatmos;

namespace {

const NormalizationConfig kCfg = NormalizationConfig::defaults();
const Lexicon kLex = Lexicon::defaults();

struct CountingProvider final : EmbeddingProvider {
  HashedEmbeddingProvider inner{384};
  int batch_calls = 0;
  std::size_t texts_embedded = 0;

  std::size_t dimension() const override { return inner.dimension(); }
  std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) override {
    ++batch_calls;
    texts_embedded += texts.size();
    return inner.embed_batch(texts);
  }
  // Same identity as the wrapped provider so checkpoints interoperate.
  std::string describe() const override { return inner.describe(); }
};

// Fails every embed_batch call after the first `allowed` texts.
struct TrippingProvider final : EmbeddingProvider {
  HashedEmbeddingProvider inner{384};
  std::size_t allowed = 0;
  std::size_t seen = 0;

  std::size_t dimension() const override { return inner.dimension(); }
  std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) override {
    if (seen + texts.size() > allowed) {
      throw ProviderError("tripped");
    }
    seen += texts.size();
    return inner.embed_batch(texts);
  }
  std::string describe() const override { return inner.describe(); }
};

std::vector<std::string> fixture_comments(std::vector<bool>* expected_pass) {
  const CsvTable t = read_csv_file(std::string(CHATMOS_TEST_DATA_DIR) +
                                   "/comments_fixture.csv");
  const std::size_t comment_col = t.column("original_comment");
  const std::size_t pass_col = t.column("expected_pass");
  std::vector<std::string> comments;
  for (const auto& row : t.rows) {
    comments.push_back(row[comment_col]);
    if (expected_pass) expected_pass->push_back(row[pass_col] == "1");
  }
  return comments;
}

AnchorSet default_anchors(EmbeddingProvider& provider) {
  return AnchorSet::build(AnchorSet::default_phrases(), provider);
}

}  // namespace

TEST_CASE("length-sensitive thresholds route as specified") {
  const FilterThresholds t;
  // Mid-band similarity: shorter than 5 words needs 0.40.
  CHECK_FALSE(similarity_verdict(0.30, 4, t));
  CHECK(similarity_verdict(0.30, 5, t));
  // Comparisons are inclusive.
  CHECK(similarity_verdict(0.40, 4, t));
  CHECK(similarity_verdict(0.28, 5, t));
  CHECK_FALSE(similarity_verdict(0.3999999, 4, t));
  CHECK_FALSE(similarity_verdict(0.2799999, 9, t));
}

TEST_CASE("threshold validation") {
  FilterThresholds t;
  t.min_words = 0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = FilterThresholds{};
  t.short_text_threshold = 0.2;  // below the long-text threshold
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = FilterThresholds{};
  t.long_text_threshold = -1.5;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("anchor set builds one vector per phrase") {
  HashedEmbeddingProvider provider(384);
  const AnchorSet anchors = default_anchors(provider);
  CHECK(anchors.phrases.size() == 13);
  CHECK(anchors.vectors.size() == anchors.phrases.size());
  CHECK_THROWS_AS(AnchorSet::build({}, provider), ConfigError);
}

TEST_CASE("max anchor similarity matches the hand-computed value") {
  HashedEmbeddingProvider provider(384);
  const AnchorSet anchors = default_anchors(provider);
  const double sim =
      max_anchor_similarity("twitch lagging or sum", anchors, provider);
  CHECK(sim == doctest::Approx(2.0 / std::sqrt(20.0)).epsilon(1e-9));
}

TEST_CASE("fixture corpus reproduces the hand-labeled verdict mask") {
  std::vector<bool> expected;
  const auto comments = fixture_comments(&expected);
  REQUIRE(comments.size() == 30);

  HashedEmbeddingProvider provider(384);
  const AnchorSet anchors = default_anchors(provider);
  const auto decisions = filter_batch(comments, kCfg, kLex, anchors,
                                      FilterThresholds{}, provider);
  REQUIRE(decisions.size() == comments.size());
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    CAPTURE(comments[i]);
    CHECK(decisions[i].passed == expected[i]);
    CHECK(decisions[i].original == comments[i]);
  }
}

TEST_CASE("a pass implies rule pass and a recorded similarity") {
  const auto comments = fixture_comments(nullptr);
  HashedEmbeddingProvider provider(384);
  const AnchorSet anchors = default_anchors(provider);
  const auto decisions = filter_batch(comments, kCfg, kLex, anchors,
                                      FilterThresholds{}, provider);
  for (const auto& d : decisions) {
    if (d.passed) {
      CHECK(d.rule_pass);
      CHECK(d.similarity.has_value());
      const double cutoff = d.word_count < 5 ? 0.40 : 0.28;
      CHECK(*d.similarity >= cutoff);
    }
    if (!d.rule_pass) {
      // No embedding is spent on rule-rejected comments.
      CHECK_FALSE(d.similarity.has_value());
    }
  }
}

TEST_CASE("rule-vetoed and empty comments never reach the embedder") {
  CountingProvider provider;
  const AnchorSet anchors = default_anchors(provider);
  provider.batch_calls = 0;
  provider.texts_embedded = 0;
  const auto decisions =
      filter_batch({"KEKW", "!!!", "wow nice play"}, kCfg, kLex, anchors,
                   FilterThresholds{}, provider);
  CHECK(provider.batch_calls == 0);
  for (const auto& d : decisions) {
    CHECK_FALSE(d.passed);
    CHECK_FALSE(d.similarity.has_value());
  }
}

TEST_CASE("decision mask preserves order") {
  HashedEmbeddingProvider provider(384);
  const AnchorSet anchors = default_anchors(provider);
  const auto decisions =
      filter_batch({"stream buffering", "KEKW"}, kCfg, kLex, anchors,
                   FilterThresholds{}, provider);
  CHECK(decision_mask(decisions) == std::vector<bool>{true, false});
}

TEST_CASE("checkpoint resume skips completed embeddings") {
  const auto dir = std::filesystem::temp_directory_path() /
                   "chatmos_filter_ckpt_test";
  std::filesystem::remove_all(dir);
  const auto comments = fixture_comments(nullptr);

  FilterOptions options;
  options.checkpoint_path = dir / "filter.jsonl";

  CountingProvider first;
  const AnchorSet anchors = default_anchors(first);
  first.batch_calls = 0;
  first.texts_embedded = 0;
  const auto run1 = filter_batch(comments, kCfg, kLex, anchors,
                                 FilterThresholds{}, first, options);
  CHECK(first.texts_embedded == 14);  // rule-passing fixture rows

  CountingProvider second;
  const auto run2 = filter_batch(comments, kCfg, kLex, anchors,
                                 FilterThresholds{}, second, options);
  CHECK(second.batch_calls == 0);
  REQUIRE(run2.size() == run1.size());
  for (std::size_t i = 0; i < run1.size(); ++i) {
    CHECK(run1[i].passed == run2[i].passed);
    CHECK(run1[i].similarity == run2[i].similarity);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("checkpoint is discarded when inputs change") {
  const auto dir = std::filesystem::temp_directory_path() /
                   "chatmos_filter_ckpt_change";
  std::filesystem::remove_all(dir);
  FilterOptions options;
  options.checkpoint_path = dir / "filter.jsonl";

  CountingProvider provider;
  const AnchorSet anchors = default_anchors(provider);
  filter_batch({"stream buffering"}, kCfg, kLex, anchors, FilterThresholds{},
               provider, options);

  CountingProvider fresh;
  fresh.batch_calls = 0;
  filter_batch({"twitch lagging or sum"}, kCfg, kLex, anchors,
               FilterThresholds{}, fresh, options);
  CHECK(fresh.batch_calls == 1);  // fingerprint mismatch forces a redo
  std::filesystem::remove_all(dir);
}

TEST_CASE("provider failure aborts but completed chunks survive") {
  const auto dir = std::filesystem::temp_directory_path() /
                   "chatmos_filter_ckpt_fail";
  std::filesystem::remove_all(dir);
  const auto comments = fixture_comments(nullptr);

  FilterOptions options;
  options.embed_batch_size = 4;
  options.checkpoint_path = dir / "filter.jsonl";

  TrippingProvider flaky;
  const AnchorSet anchors = [&] {
    HashedEmbeddingProvider plain(384);
    return default_anchors(plain);
  }();
  flaky.allowed = 8;  // two chunks of four, then trip
  CHECK_THROWS_AS(filter_batch(comments, kCfg, kLex, anchors,
                               FilterThresholds{}, flaky, options),
                  ProviderError);

  CountingProvider resume;
  const auto decisions = filter_batch(comments, kCfg, kLex, anchors,
                                      FilterThresholds{}, resume, options);
  CHECK(resume.texts_embedded == 14 - 8);
  CHECK(decisions.size() == comments.size());
  std::filesystem::remove_all(dir);
}

TEST_CASE("embed batch size must be positive") {
  HashedEmbeddingProvider provider(384);
  const AnchorSet anchors = default_anchors(provider);
  FilterOptions options;
  options.embed_batch_size = 0;
  CHECK_THROWS_AS(filter_batch({"x"}, kCfg, kLex, anchors, FilterThresholds{},
                               provider, options),
                  ConfigError);
}
