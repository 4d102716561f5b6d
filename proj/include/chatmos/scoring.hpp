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

#ifndef CHATMOS_SCORING_HPP_
#define CHATMOS_SCORING_HPP_

#include <array>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace chatmos {

/// Prompt template with {scale}, {fallback}, and {comment} placeholders.
/// {comment} is mandatory; the other two are optional.
struct ScoringPrompt {
  std::string template_text;
  std::array<std::string, 5> scale_descriptions;
  std::string fallback_instruction;

  static ScoringPrompt defaults();
  static ScoringPrompt from_file(const std::filesystem::path& path);
  void validate() const;
  std::string render(const std::string& comment) const;
};

/// A comment with its accepted rating. mos is -1 (not experience-related)
/// or an integer in [1, 5]; anything else is rejected at construction.
class ScoredComment {
 public:
  ScoredComment(std::string comment, int mos);

  const std::string& comment() const { return comment_; }
  int mos() const { return mos_; }
  bool valid() const { return mos_ >= 1; }

 private:
  std::string comment_;
  int mos_;
};

struct BackendConfig {
  double pacing_seconds = 1.0;
  int max_retries = 3;  // total attempts per comment
  bool deterministic = true;
  std::string endpoint;
  std::string api_key;
  std::string model;

  void validate() const;
};

struct ScoreRequest {
  std::string prompt;   // fully rendered prompt
  std::string comment;  // the raw comment alone
  bool deterministic = true;
};

class ScoringBackend {
 public:
  virtual ~ScoringBackend() = default;
  /// Returns the backend's raw textual reply. Throws ProviderError on
  /// transport or protocol failure.
  virtual std::string complete(const ScoreRequest& request) = 0;
  virtual std::string describe() const = 0;
};

/// Offline backend: first substring rule matching the lowercased comment
/// wins. Rule order is significant.
class RuleStubBackend final : public ScoringBackend {
 public:
  using Rule = std::pair<std::string, int>;

  explicit RuleStubBackend(std::vector<Rule> rules = default_rules());
  static std::vector<Rule> default_rules();

  std::string complete(const ScoreRequest& request) override;
  std::string describe() const override;

 private:
  std::vector<Rule> rules_;
};

/// Chat-completion client. Endpoint and credentials come from the config
/// or from CHATMOS_LLM_URL / CHATMOS_LLM_API_KEY / CHATMOS_LLM_MODEL.
class RemoteChatBackend final : public ScoringBackend {
 public:
  explicit RemoteChatBackend(BackendConfig config);

  std::string complete(const ScoreRequest& request) override;
  std::string describe() const override;

 private:
  BackendConfig config_;
};

/// Enforces a minimum interval between consecutive paced calls. The first
/// call never waits.
class RequestPacer {
 public:
  void pace(double min_interval_seconds);

 private:
  bool armed_ = false;
  std::chrono::steady_clock::time_point last_{};
};

/// Strict pass: the trimmed reply must be exactly one of -1, 1..5.
/// Lenient pass: first integer found anywhere in the reply.
/// Throws ScoreParseError (no integer) or ScoreRangeError (integer outside
/// the scale).
int parse_score(const std::string& raw);

/// Scores one comment with retries and pacing. Rethrows the final attempt's
/// error once max_retries attempts are spent.
ScoredComment score_comment(ScoringBackend& backend,
                            const ScoringPrompt& prompt,
                            const std::string& comment,
                            const BackendConfig& config, RequestPacer& pacer);

struct ScoreRow {
  std::string comment;
  int mos = -1;
  bool scored = false;  // false means every attempt failed
  std::string error;    // failure detail when scored is false
};

struct ScoreBatchResult {
  std::vector<ScoreRow> rows;

  /// Rows with mos in [1, 5].
  std::vector<ScoredComment> valid() const;
  /// Rows excluded from aggregation: -1 ratings and failed rows.
  std::vector<ScoreRow> excluded() const;
};

struct ScoreOptions {
  std::filesystem::path checkpoint_path;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Scores a batch in input order. Failed comments are recorded, not fatal.
/// With a checkpoint configured, already-scored rows are never re-sent.
ScoreBatchResult score_batch(ScoringBackend& backend,
                             const ScoringPrompt& prompt,
                             const std::vector<std::string>& comments,
                             const BackendConfig& config,
                             const ScoreOptions& options = {});

/// Builds the backend named by config ("stub" or "remote").
std::unique_ptr<ScoringBackend> make_backend(const std::string& kind,
                                             const BackendConfig& config);

}  // namespace chatmos

#endif  // CHATMOS_SCORING_HPP_
