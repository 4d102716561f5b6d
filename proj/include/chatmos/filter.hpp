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

#ifndef CHATMOS_FILTER_HPP_
#define CHATMOS_FILTER_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chatmos/embedding.hpp"
#include "chatmos/lexicon.hpp"
#include "chatmos/normalize.hpp"

namespace chatmos {

/// Length-sensitive similarity thresholds: comments shorter than min_words
/// must clear the higher short_text_threshold.
struct FilterThresholds {
  int min_words = 5;
  double short_text_threshold = 0.40;
  double long_text_threshold = 0.28;

  void validate() const;
};

/// Canonical complaint sentences plus their embeddings (1:1, same provider
/// as the comments being filtered).
struct AnchorSet {
  std::vector<std::string> phrases;
  std::vector<EmbeddingVector> vectors;

  static std::vector<std::string> default_phrases();
  static AnchorSet build(const std::vector<std::string>& phrases,
                         EmbeddingProvider& provider);
};

/// Max over anchors of cosine(embed(text), anchor). Anchors must be
/// non-empty; provider errors propagate.
double max_anchor_similarity(const std::string& normalized,
                             const AnchorSet& anchors,
                             EmbeddingProvider& provider);

/// Threshold comparisons are inclusive (>=).
bool similarity_verdict(double similarity, int words,
                        const FilterThresholds& thresholds);

/// Everything the filter decided about one comment. `similarity` is only
/// present when the rule layer passed and the text was non-empty, since
/// no embedding is requested otherwise.
struct FilterDecision {
  std::string original;
  std::string normalized;
  MatchFlags flags;
  int word_count = 0;
  bool rule_pass = false;
  std::optional<double> similarity;
  bool passed = false;
};

struct FilterOptions {
  std::size_t embed_batch_size = 64;
  /// When set, per-chunk decisions are persisted here and interrupted runs
  /// resume without re-embedding completed chunks.
  std::filesystem::path checkpoint_path;
};

/// Runs the full filter (normalize -> keyword rules -> anchor similarity)
/// over a batch. Order-preserving: decision[i] corresponds to raws[i].
/// A provider failure aborts the batch (completed chunks remain in the
/// checkpoint when one is configured; no partial results are returned).
std::vector<FilterDecision> filter_batch(const std::vector<std::string>& raws,
                                         const NormalizationConfig& cfg,
                                         const Lexicon& lexicon,
                                         const AnchorSet& anchors,
                                         const FilterThresholds& thresholds,
                                         EmbeddingProvider& provider,
                                         const FilterOptions& options = {});

std::vector<bool> decision_mask(const std::vector<FilterDecision>& decisions);

}  // namespace chatmos

#endif  // CHATMOS_FILTER_HPP_
