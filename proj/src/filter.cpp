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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "chatmos/detail/fnv.hpp"
#include "chatmos/errors.hpp"

namespace chatmos {

namespace {

using detail::fnv_mix;

std::string fingerprint_inputs(const std::vector<std::string>& raws,
                               const NormalizationConfig& cfg,
                               const Lexicon& lexicon,
                               const AnchorSet& anchors,
                               const FilterThresholds& thresholds,
                               const EmbeddingProvider& provider) {
  std::uint64_t h = detail::kFnvOffset;
  fnv_mix(h, "chatmos-filter-v1");
  fnv_mix(h, provider.describe());
  std::ostringstream t;
  t << thresholds.min_words << ' ' << thresholds.short_text_threshold << ' '
    << thresholds.long_text_threshold;
  fnv_mix(h, t.str());
  fnv_mix(h, std::to_string(cfg.collapse_run_length));
  fnv_mix(h, cfg.strip_punctuation ? "p1" : "p0");
  fnv_mix(h, cfg.strip_symbols ? "s1" : "s0");
  for (const auto& [from, to] : cfg.typo_table) {
    fnv_mix(h, from);
    fnv_mix(h, to);
  }
  for (const auto& emote : cfg.emote_denylist) fnv_mix(h, emote);
  for (const auto& word : lexicon.problem_keywords) fnv_mix(h, word);
  for (const auto& word : lexicon.context_keywords) fnv_mix(h, word);
  for (const auto& word : lexicon.meme_keywords) fnv_mix(h, word);
  for (const auto& phrase : anchors.phrases) fnv_mix(h, phrase);
  fnv_mix(h, std::to_string(raws.size()));
  for (const auto& raw : raws) fnv_mix(h, raw);
  return detail::fnv_hex(h);
}

constexpr const char* kCheckpointKind = "chatmos-filter-checkpoint";

// Reads previously persisted similarities keyed by input index. Returns
// false when the file is absent or belongs to different inputs, in which
// case the caller starts a fresh checkpoint.
bool load_checkpoint(const std::filesystem::path& path,
                     const std::string& fingerprint,
                     std::unordered_map<std::size_t, double>& out) {
  std::ifstream in(path);
  if (!in.is_open()) return false;
  std::string line;
  if (!std::getline(in, line)) return false;
  nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object()) return false;
  if (header.value("kind", "") != kCheckpointKind) return false;
  if (header.value("fingerprint", "") != fingerprint) return false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
    // A torn tail line from an interrupted write is dropped, not fatal.
    if (row.is_discarded() || !row.is_object()) break;
    if (!row.contains("i") || !row.contains("s")) break;
    out[row["i"].get<std::size_t>()] = row["s"].get<double>();
  }
  return true;
}

double max_similarity_against(const EmbeddingVector& vec,
                              const AnchorSet& anchors) {
  double best = -1.0;
  for (const auto& anchor : anchors.vectors) {
    best = std::max(best, cosine(vec, anchor));
  }
  return best;
}

}  // namespace

void FilterThresholds::validate() const {
  if (min_words < 1) {
    throw ConfigError("filter: min_words must be >= 1");
  }
  if (short_text_threshold < -1.0 || short_text_threshold > 1.0 ||
      long_text_threshold < -1.0 || long_text_threshold > 1.0) {
    throw ConfigError("filter: thresholds must lie in [-1, 1]");
  }
  if (short_text_threshold < long_text_threshold) {
    throw ConfigError(
        "filter: short_text_threshold must be >= long_text_threshold");
  }
}

std::vector<std::string> AnchorSet::default_phrases() {
  return {
      "the stream keeps buffering",
      "constant lag and disconnects",
      "the video keeps freezing",
      "stream quality is really bad",
      "my connection to the stream keeps dropping",
      "the audio is out of sync",
      "twitch keeps lagging for me",
      "the stream is so choppy today",
      "video is stuttering nonstop",
      "is the stream lagging for anyone else",
      "the feed keeps cutting out",
      "everything is pixelated and blurry",
      "huge audio delay on the stream",
  };
}

AnchorSet AnchorSet::build(const std::vector<std::string>& phrases,
                           EmbeddingProvider& provider) {
  if (phrases.empty()) {
    throw ConfigError("filter: anchor phrase list is empty");
  }
  AnchorSet set;
  set.phrases = phrases;
  set.vectors = provider.embed_batch(phrases);
  return set;
}

double max_anchor_similarity(const std::string& normalized,
                             const AnchorSet& anchors,
                             EmbeddingProvider& provider) {
  if (anchors.vectors.empty()) {
    throw ConfigError("filter: anchor set has no vectors");
  }
  return max_similarity_against(provider.embed(normalized), anchors);
}

bool similarity_verdict(double similarity, int words,
                        const FilterThresholds& thresholds) {
  const double cutoff = words < thresholds.min_words
                            ? thresholds.short_text_threshold
                            : thresholds.long_text_threshold;
  return similarity >= cutoff;
}

std::vector<FilterDecision> filter_batch(const std::vector<std::string>& raws,
                                         const NormalizationConfig& cfg,
                                         const Lexicon& lexicon,
                                         const AnchorSet& anchors,
                                         const FilterThresholds& thresholds,
                                         EmbeddingProvider& provider,
                                         const FilterOptions& options) {
  thresholds.validate();
  if (anchors.vectors.empty()) {
    throw ConfigError("filter: anchor set has no vectors");
  }
  if (options.embed_batch_size == 0) {
    throw ConfigError("filter: embed_batch_size must be >= 1");
  }

  std::vector<FilterDecision> decisions(raws.size());
  std::vector<std::size_t> pending;
  pending.reserve(raws.size());
  for (std::size_t i = 0; i < raws.size(); ++i) {
    FilterDecision& d = decisions[i];
    d.original = raws[i];
    d.normalized = normalize_text(raws[i], cfg);
    d.word_count = word_count(d.normalized);
    d.flags = match_keywords(d.normalized, lexicon);
    d.rule_pass = rule_verdict(d.flags);
    if (d.rule_pass && !d.normalized.empty()) {
      pending.push_back(i);
    }
  }

  std::unordered_map<std::size_t, double> resumed;
  std::ofstream checkpoint;
  if (!options.checkpoint_path.empty()) {
    const std::string fp = fingerprint_inputs(raws, cfg, lexicon, anchors,
                                              thresholds, provider);
    const bool usable = load_checkpoint(options.checkpoint_path, fp, resumed);
    if (const auto dir = options.checkpoint_path.parent_path(); !dir.empty()) {
      std::filesystem::create_directories(dir);
    }
    checkpoint.open(options.checkpoint_path,
                    usable ? std::ios::app : std::ios::trunc);
    if (!checkpoint.is_open()) {
      throw PipelineError("filter: cannot open checkpoint file " +
                          options.checkpoint_path.string());
    }
    if (!usable) {
      nlohmann::json header;
      header["kind"] = kCheckpointKind;
      header["version"] = 1;
      header["fingerprint"] = fp;
      checkpoint << header.dump() << '\n';
      checkpoint.flush();
    }
  }

  std::vector<std::size_t> todo;
  todo.reserve(pending.size());
  for (std::size_t idx : pending) {
    auto it = resumed.find(idx);
    if (it != resumed.end()) {
      decisions[idx].similarity = it->second;
    } else {
      todo.push_back(idx);
    }
  }

  for (std::size_t off = 0; off < todo.size(); off += options.embed_batch_size) {
    const std::size_t end =
        std::min(off + options.embed_batch_size, todo.size());
    std::vector<std::string> texts;
    texts.reserve(end - off);
    for (std::size_t k = off; k < end; ++k) {
      texts.push_back(decisions[todo[k]].normalized);
    }
    const auto vectors = provider.embed_batch(texts);
    if (vectors.size() != texts.size()) {
      throw ProviderError("filter: provider returned " +
                          std::to_string(vectors.size()) + " vectors for " +
                          std::to_string(texts.size()) + " texts");
    }
    for (std::size_t k = off; k < end; ++k) {
      const double sim = max_similarity_against(vectors[k - off], anchors);
      decisions[todo[k]].similarity = sim;
      if (checkpoint.is_open()) {
        nlohmann::json row;
        row["i"] = todo[k];
        row["s"] = sim;
        checkpoint << row.dump() << '\n';
      }
    }
    // Flushed per chunk so an interrupted run resumes at a chunk boundary.
    if (checkpoint.is_open()) checkpoint.flush();
  }

  for (auto& d : decisions) {
    d.passed = d.rule_pass && d.similarity.has_value() &&
               similarity_verdict(*d.similarity, d.word_count, thresholds);
  }
  return decisions;
}

std::vector<bool> decision_mask(const std::vector<FilterDecision>& decisions) {
  std::vector<bool> mask;
  mask.reserve(decisions.size());
  for (const auto& d : decisions) mask.push_back(d.passed);
  return mask;
}

}  // namespace chatmos
