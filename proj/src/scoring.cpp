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

#include "chatmos/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "chatmos/detail/fnv.hpp"
#include "chatmos/errors.hpp"

namespace chatmos {

namespace {

std::string lowercase_ascii(const std::string& text) {
  std::string out = text;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

void replace_all(std::string& text, std::string_view placeholder,
                 const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value != nullptr ? value : fallback;
}

// Splits "https://host:1234/path" into base URL and path for httplib.
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw ConfigError("scoring: endpoint must include a scheme: " + url);
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

ScoringPrompt ScoringPrompt::defaults() {
  ScoringPrompt prompt;
  prompt.template_text =
      "Rate the streaming experience described by this live stream comment "
      "on a scale of 1 to 5.\n"
      "{scale}\n"
      "{fallback}\n"
      "Reply with only the number.\n"
      "Comment: {comment}";
  prompt.scale_descriptions = {
      "1: Very poor experience, stream effectively unusable.",
      "2: Poor experience, heavy buffering, lag, or disconnects.",
      "3: Fair experience, noticeable issues but watchable.",
      "4: Good experience, only minor or brief issues.",
      "5: Excellent experience, smooth playback, no issues.",
  };
  prompt.fallback_instruction =
      "If the comment does not describe the viewing experience, reply -1.";
  return prompt;
}

ScoringPrompt ScoringPrompt::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw ConfigError("scoring: cannot open prompt file " + path.string());
  }
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ConfigError("scoring: prompt file is not a JSON object: " +
                      path.string());
  }
  ScoringPrompt prompt = defaults();
  if (doc.contains("template")) {
    prompt.template_text = doc["template"].get<std::string>();
  }
  if (doc.contains("scale")) {
    const auto& scale = doc["scale"];
    if (!scale.is_array() || scale.size() != 5) {
      throw ConfigError("scoring: prompt scale must list exactly 5 entries");
    }
    for (std::size_t i = 0; i < 5; ++i) {
      prompt.scale_descriptions[i] = scale[i].get<std::string>();
    }
  }
  if (doc.contains("fallback")) {
    prompt.fallback_instruction = doc["fallback"].get<std::string>();
  }
  prompt.validate();
  return prompt;
}

void ScoringPrompt::validate() const {
  if (template_text.find("{comment}") == std::string::npos) {
    throw ConfigError("scoring: prompt template lacks the {comment} slot");
  }
  for (const auto& line : scale_descriptions) {
    if (line.empty()) {
      throw ConfigError("scoring: prompt scale description is empty");
    }
  }
  if (fallback_instruction.empty()) {
    throw ConfigError("scoring: prompt fallback instruction is empty");
  }
}

std::string ScoringPrompt::render(const std::string& comment) const {
  validate();
  std::string scale;
  for (const auto& line : scale_descriptions) {
    if (!scale.empty()) scale += '\n';
    scale += line;
  }
  std::string out = template_text;
  replace_all(out, "{scale}", scale);
  replace_all(out, "{fallback}", fallback_instruction);
  replace_all(out, "{comment}", comment);
  return out;
}

ScoredComment::ScoredComment(std::string comment, int mos)
    : comment_(std::move(comment)), mos_(mos) {
  if (mos_ != -1 && (mos_ < 1 || mos_ > 5)) {
    throw ScoreRangeError("score " + std::to_string(mos_) +
                          " outside {-1, 1..5}");
  }
}

void BackendConfig::validate() const {
  if (pacing_seconds < 0.0) {
    throw ConfigError("scoring: pacing_seconds must be >= 0");
  }
  if (max_retries < 1) {
    throw ConfigError("scoring: max_retries must be >= 1");
  }
}

RuleStubBackend::RuleStubBackend(std::vector<Rule> rules)
    : rules_(std::move(rules)) {
  for (const auto& [needle, score] : rules_) {
    if (needle.empty()) {
      throw ConfigError("scoring: stub rule needle is empty");
    }
    if (score != -1 && (score < 1 || score > 5)) {
      throw ConfigError("scoring: stub rule score outside {-1, 1..5}");
    }
  }
}

std::vector<RuleStubBackend::Rule> RuleStubBackend::default_rules() {
  // First match wins, so exonerating phrases precede their keywords.
  return {
      {"no buffering", 5}, {"no lag", 5},        {"perfect", 5},
      {"flawless", 5},     {"smooth", 5},        {"minor", 3},
      {"unwatchable", 1},  {"unplayable", 1},    {"crash", 1},
      {"freez", 1},        {"frozen", 1},        {"buffer", 2},
      {"lag", 2},          {"stutter", 2},       {"choppy", 2},
      {"pixelated", 2},    {"disconnect", 2},    {"drop", 2},
      {"audio", 2},        {"cutting out", 2},   {"scuffed", 2},
      {"wont load", 1},    {"won't load", 1},    {"cant connect", 1},
      {"can't connect", 1},
  };
}

std::string RuleStubBackend::complete(const ScoreRequest& request) {
  const std::string haystack = lowercase_ascii(request.comment);
  for (const auto& [needle, score] : rules_) {
    if (haystack.find(needle) != std::string::npos) {
      return std::to_string(score);
    }
  }
  return "-1";
}

std::string RuleStubBackend::describe() const {
  return "rule-stub/" + std::to_string(rules_.size());
}

RemoteChatBackend::RemoteChatBackend(BackendConfig config)
    : config_(std::move(config)) {
  config_.validate();
  if (config_.endpoint.empty()) {
    config_.endpoint = env_or("CHATMOS_LLM_URL", "");
  }
  if (config_.api_key.empty()) {
    config_.api_key = env_or("CHATMOS_LLM_API_KEY", "");
  }
  if (config_.model.empty()) {
    config_.model = env_or("CHATMOS_LLM_MODEL", "");
  }
  if (config_.endpoint.empty()) {
    throw ConfigError(
        "scoring: remote backend needs an endpoint (config or "
        "CHATMOS_LLM_URL)");
  }
  if (config_.model.empty()) {
    throw ConfigError(
        "scoring: remote backend needs a model name (config or "
        "CHATMOS_LLM_MODEL)");
  }
}

std::string RemoteChatBackend::complete(const ScoreRequest& request) {
  const auto [base, path] = split_url(config_.endpoint);
  httplib::Client client(base);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(60, 0);

  nlohmann::json body;
  body["model"] = config_.model;
  body["messages"] = nlohmann::json::array(
      {{{"role", "user"}, {"content", request.prompt}}});
  body["temperature"] = request.deterministic ? 0.0 : 1.0;

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw ProviderError("scoring: request to " + config_.endpoint +
                        " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ProviderError("scoring: endpoint returned HTTP " +
                        std::to_string(res->status));
  }
  nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
  if (doc.is_discarded()) {
    throw ProviderError("scoring: endpoint returned invalid JSON");
  }
  try {
    return doc.at("choices").at(0).at("message").at("content")
        .get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(std::string("scoring: malformed completion: ") +
                        e.what());
  }
}

std::string RemoteChatBackend::describe() const {
  return "remote-chat/" + config_.model;
}

void RequestPacer::pace(double min_interval_seconds) {
  const auto now = std::chrono::steady_clock::now();
  if (armed_ && min_interval_seconds > 0.0) {
    const auto interval = std::chrono::duration<double>(min_interval_seconds);
    const auto ready =
        last_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    interval);
    if (now < ready) std::this_thread::sleep_until(ready);
  }
  armed_ = true;
  last_ = std::chrono::steady_clock::now();
}

namespace {

// "3.", "(4)", "score:5" lose their wrapping; "2.5" and "4/5" stay intact
// and are rejected by the integer check.
std::string strip_token_decor(std::string token) {
  const auto is_decor = [](char c) {
    return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' ||
           c == '?' || c == ')' || c == '(' || c == '[' || c == ']' ||
           c == '"' || c == '\'' || c == '*';
  };
  while (!token.empty() && is_decor(token.back())) token.pop_back();
  while (!token.empty() && is_decor(token.front())) token.erase(0, 1);
  return token;
}

bool is_integer_token(const std::string& token) {
  if (token.empty()) return false;
  std::size_t i = token[0] == '-' ? 1 : 0;
  if (i == token.size()) return false;
  for (; i < token.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(token[i]))) return false;
  }
  return true;
}

}  // namespace

int parse_score(const std::string& raw) {
  const auto first = raw.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    throw ScoreParseError("empty reply");
  }
  const auto last = raw.find_last_not_of(" \t\r\n");
  const std::string trimmed = raw.substr(first, last - first + 1);

  static const std::unordered_map<std::string, int> kExact = {
      {"-1", -1}, {"1", 1}, {"2", 2}, {"3", 3}, {"4", 4}, {"5", 5},
  };
  if (auto it = kExact.find(trimmed); it != kExact.end()) return it->second;

  // Lenient pass: first whitespace-separated token that is an integer once
  // surrounding punctuation is removed.
  std::istringstream stream(trimmed);
  std::string token;
  while (stream >> token) {
    // "score:5" style prefixes: keep only the part after the last colon.
    if (const auto colon = token.rfind(':'); colon != std::string::npos) {
      token = token.substr(colon + 1);
    }
    token = strip_token_decor(std::move(token));
    if (!is_integer_token(token)) continue;
    long value = 0;
    try {
      value = std::stol(token);
    } catch (const std::exception&) {
      continue;  // out of long range; certainly not a score
    }
    if (value == -1 || (value >= 1 && value <= 5)) {
      return static_cast<int>(value);
    }
    throw ScoreRangeError("reply contained out-of-scale integer " +
                          std::to_string(value) + ": " + trimmed);
  }
  throw ScoreParseError("no integer in reply: " + trimmed);
}

ScoredComment score_comment(ScoringBackend& backend,
                            const ScoringPrompt& prompt,
                            const std::string& comment,
                            const BackendConfig& config, RequestPacer& pacer) {
  config.validate();
  ScoreRequest request;
  request.prompt = prompt.render(comment);
  request.comment = comment;
  request.deterministic = config.deterministic;

  std::exception_ptr last_error;
  for (int attempt = 0; attempt < config.max_retries; ++attempt) {
    pacer.pace(config.pacing_seconds);
    try {
      return ScoredComment(comment, parse_score(backend.complete(request)));
    } catch (const Error&) {
      last_error = std::current_exception();
    }
  }
  std::rethrow_exception(last_error);
}

std::vector<ScoredComment> ScoreBatchResult::valid() const {
  std::vector<ScoredComment> out;
  for (const auto& row : rows) {
    if (row.scored && row.mos >= 1) out.emplace_back(row.comment, row.mos);
  }
  return out;
}

std::vector<ScoreRow> ScoreBatchResult::excluded() const {
  std::vector<ScoreRow> out;
  for (const auto& row : rows) {
    if (!row.scored || row.mos == -1) out.push_back(row);
  }
  return out;
}

namespace {

constexpr const char* kScoreCheckpointKind = "chatmos-score-checkpoint";

std::string score_fingerprint(const std::vector<std::string>& comments,
                              const ScoringPrompt& prompt,
                              const BackendConfig& config,
                              const ScoringBackend& backend) {
  std::uint64_t h = detail::kFnvOffset;
  detail::fnv_mix(h, "chatmos-score-v1");
  detail::fnv_mix(h, backend.describe());
  detail::fnv_mix(h, prompt.template_text);
  for (const auto& line : prompt.scale_descriptions) detail::fnv_mix(h, line);
  detail::fnv_mix(h, prompt.fallback_instruction);
  detail::fnv_mix(h, config.deterministic ? "det" : "sampled");
  detail::fnv_mix(h, config.model);
  detail::fnv_mix(h, std::to_string(comments.size()));
  for (const auto& comment : comments) detail::fnv_mix(h, comment);
  return detail::fnv_hex(h);
}

bool load_score_checkpoint(const std::filesystem::path& path,
                           const std::string& fingerprint,
                           std::unordered_map<std::size_t, ScoreRow>& out) {
  std::ifstream in(path);
  if (!in.is_open()) return false;
  std::string line;
  if (!std::getline(in, line)) return false;
  nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object()) return false;
  if (header.value("kind", "") != kScoreCheckpointKind) return false;
  if (header.value("fingerprint", "") != fingerprint) return false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object()) break;
    if (!row.contains("i") || !row.contains("mos") || !row.contains("ok")) {
      break;
    }
    ScoreRow parsed;
    parsed.mos = row["mos"].get<int>();
    parsed.scored = row["ok"].get<bool>();
    parsed.error = row.value("error", "");
    out[row["i"].get<std::size_t>()] = std::move(parsed);
  }
  return true;
}

}  // namespace

ScoreBatchResult score_batch(ScoringBackend& backend,
                             const ScoringPrompt& prompt,
                             const std::vector<std::string>& comments,
                             const BackendConfig& config,
                             const ScoreOptions& options) {
  config.validate();
  prompt.validate();

  std::unordered_map<std::size_t, ScoreRow> resumed;
  std::ofstream checkpoint;
  if (!options.checkpoint_path.empty()) {
    const std::string fp =
        score_fingerprint(comments, prompt, config, backend);
    const bool usable =
        load_score_checkpoint(options.checkpoint_path, fp, resumed);
    if (const auto dir = options.checkpoint_path.parent_path(); !dir.empty()) {
      std::filesystem::create_directories(dir);
    }
    checkpoint.open(options.checkpoint_path,
                    usable ? std::ios::app : std::ios::trunc);
    if (!checkpoint.is_open()) {
      throw PipelineError("scoring: cannot open checkpoint file " +
                          options.checkpoint_path.string());
    }
    if (!usable) {
      nlohmann::json header;
      header["kind"] = kScoreCheckpointKind;
      header["version"] = 1;
      header["fingerprint"] = fp;
      checkpoint << header.dump() << '\n';
      checkpoint.flush();
    }
  }

  ScoreBatchResult result;
  result.rows.resize(comments.size());
  RequestPacer pacer;
  std::size_t done = 0;
  for (std::size_t i = 0; i < comments.size(); ++i) {
    ScoreRow& row = result.rows[i];
    row.comment = comments[i];
    if (auto it = resumed.find(i); it != resumed.end()) {
      row.mos = it->second.mos;
      row.scored = it->second.scored;
      row.error = it->second.error;
    } else {
      try {
        row.mos = score_comment(backend, prompt, comments[i], config, pacer)
                      .mos();
        row.scored = true;
      } catch (const Error& e) {
        row.mos = -1;
        row.scored = false;
        row.error = e.what();
      }
      if (checkpoint.is_open()) {
        nlohmann::json line;
        line["i"] = i;
        line["mos"] = row.mos;
        line["ok"] = row.scored;
        if (!row.error.empty()) line["error"] = row.error;
        checkpoint << line.dump() << '\n';
        checkpoint.flush();
      }
    }
    ++done;
    if (options.progress) options.progress(done, comments.size());
  }
  return result;
}

std::unique_ptr<ScoringBackend> make_backend(const std::string& kind,
                                             const BackendConfig& config) {
  if (kind == "stub") {
    return std::make_unique<RuleStubBackend>();
  }
  if (kind == "remote") {
    return std::make_unique<RemoteChatBackend>(config);
  }
  throw ConfigError("scoring: unknown backend kind: " + kind);
}

}  // namespace chatmos
