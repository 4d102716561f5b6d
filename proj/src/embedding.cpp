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

#include "chatmos/embedding.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "chatmos/detail/fnv.hpp"
#include "chatmos/errors.hpp"

namespace chatmos {

EmbeddingVector EmbeddingProvider::embed(const std::string& text) {
  auto vectors = embed_batch({text});
  if (vectors.size() != 1) {
    throw ProviderError("provider returned " + std::to_string(vectors.size()) +
                        " vectors for 1 text");
  }
  return std::move(vectors.front());
}

HashedEmbeddingProvider::HashedEmbeddingProvider(std::size_t dimension)
    : dim_(dimension) {
  if (dim_ == 0) throw ConfigError("embedding dimension must be positive");
}

std::uint64_t HashedEmbeddingProvider::fnv1a64(std::string_view token) {
  return detail::fnv1a64(token);
}

std::vector<EmbeddingVector> HashedEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    EmbeddingVector v(dim_, 0.0f);
    bool any = false;
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && text[i] == ' ') ++i;
      std::size_t start = i;
      while (i < text.size() && text[i] != ' ') ++i;
      if (i > start) {
        std::string_view token(text.data() + start, i - start);
        v[fnv1a64(token) % dim_] += 1.0f;
        any = true;
      }
    }
    if (!any) {
      throw ProviderError("cannot embed empty text");
    }
    double norm = 0.0;
    for (float x : v) norm += static_cast<double>(x) * x;
    norm = std::sqrt(norm);
    for (float& x : v) x = static_cast<float>(x / norm);
    out.push_back(std::move(v));
  }
  return out;
}

std::string HashedEmbeddingProvider::describe() const {
  return "hashed-bow/fnv1a64/d" + std::to_string(dim_);
}

namespace {

// Splits "http://host:port/path" into host:port and path.
void split_url(const std::string& url, std::string& host, std::string& path) {
  auto scheme_end = url.find("://");
  std::size_t host_start = (scheme_end == std::string::npos)
                               ? 0
                               : scheme_end + 3;
  auto path_start = url.find('/', host_start);
  if (path_start == std::string::npos) {
    host = url;
    path = "/embed";
  } else {
    host = url.substr(0, path_start);
    path = url.substr(path_start);
  }
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value ? std::string(value) : fallback;
}

}  // namespace

RemoteEmbeddingProvider::RemoteEmbeddingProvider(std::string url,
                                                 std::string api_key,
                                                 std::size_t dimension)
    : api_key_(api_key.empty() ? env_or("CHATMOS_EMBED_API_KEY", "")
                               : std::move(api_key)),
      dim_(dimension) {
  if (url.empty()) url = env_or("CHATMOS_EMBED_URL", "");
  if (url.empty()) {
    throw ConfigError(
        "remote embedding endpoint not configured (set CHATMOS_EMBED_URL)");
  }
  split_url(url, host_, path_);
  if (dim_ == 0) throw ConfigError("embedding dimension must be positive");
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
  nlohmann::json request;
  request["texts"] = texts;

  httplib::Client client(host_);
  client.set_read_timeout(60, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }
  auto res = client.Post(path_, headers, request.dump(), "application/json");
  if (!res) {
    throw ProviderError("embedding service unreachable at " + host_);
  }
  if (res->status != 200) {
    throw ProviderError("embedding service returned HTTP " +
                        std::to_string(res->status));
  }

  nlohmann::json body;
  try {
    body = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(std::string("bad embedding response: ") + e.what());
  }
  if (!body.contains("vectors") || !body["vectors"].is_array() ||
      body["vectors"].size() != texts.size()) {
    throw ProviderError("embedding response must hold one vector per text");
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& entry : body["vectors"]) {
    if (!entry.is_array() || entry.size() != dim_) {
      throw ProviderError("embedding has wrong dimension (expected " +
                          std::to_string(dim_) + ")");
    }
    EmbeddingVector v;
    v.reserve(dim_);
    bool all_zero = true;
    for (const auto& x : entry) {
      float f = x.get<float>();
      if (!std::isfinite(f)) throw ProviderError("non-finite embedding value");
      if (f != 0.0f) all_zero = false;
      v.push_back(f);
    }
    if (all_zero) throw ProviderError("embedding service returned a zero vector");
    out.push_back(std::move(v));
  }
  return out;
}

std::string RemoteEmbeddingProvider::describe() const {
  return "remote/" + host_ + path_ + "/d" + std::to_string(dim_);
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("cosine: dimension mismatch (" +
                                std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()) + ")");
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<double>(u[i]) * v[i];
    nu += static_cast<double>(u[i]) * u[i];
    nv += static_cast<double>(v[i]) * v[i];
  }
  if (nu == 0.0 || nv == 0.0) {
    throw std::invalid_argument("cosine: zero-norm input");
  }
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace chatmos
