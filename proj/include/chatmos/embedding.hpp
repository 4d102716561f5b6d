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

#ifndef CHATMOS_EMBEDDING_HPP_
#define CHATMOS_EMBEDDING_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace chatmos {

using EmbeddingVector = std::vector<float>;

/// Sentence-embedding source. Implementations must be deterministic for a
/// fixed provider and input, must return vectors of dimension() for every
/// text, and must throw ProviderError instead of silently returning zeros.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t dimension() const = 0;

  /// One vector per input text, same order. Throws ProviderError.
  virtual std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) = 0;

  /// Stable identity string, mixed into checkpoint fingerprints.
  virtual std::string describe() const = 0;

  EmbeddingVector embed(const std::string& text);
};

/// Deterministic hashed bag-of-words test double. Each whitespace token is
/// hashed (FNV-1a 64-bit) to a coordinate, counts accumulate, and the vector
/// is L2-normalized. A single token therefore embeds to a unit basis vector.
/// This is the offline test oracle anchor, not a semantic-quality claim.
class HashedEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashedEmbeddingProvider(std::size_t dimension = 384);

  std::size_t dimension() const override { return dim_; }
  std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) override;
  std::string describe() const override;

  static std::uint64_t fnv1a64(std::string_view token);

 private:
  std::size_t dim_;
};

/// Client for a remote embedding service.
///
/// Wire contract: POST <url path> with JSON {"texts": [...]} returns
/// {"vectors": [[...], ...]} in input order, one vector of `dimension`
/// floats per text. Credential (if any) is sent as a Bearer token.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  /// Reads CHATMOS_EMBED_URL / CHATMOS_EMBED_API_KEY when the arguments are
  /// empty. Throws ConfigError if no endpoint is configured.
  RemoteEmbeddingProvider(std::string url = "", std::string api_key = "",
                          std::size_t dimension = 384);

  std::size_t dimension() const override { return dim_; }
  std::vector<EmbeddingVector> embed_batch(
      const std::vector<std::string>& texts) override;
  std::string describe() const override;

 private:
  std::string host_;
  std::string path_;
  std::string api_key_;
  std::size_t dim_;
};

/// dot(u,v) / (|u|*|v|), in [-1, 1] up to rounding. Throws
/// std::invalid_argument on dimension mismatch or a zero-norm input.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

}  // namespace chatmos

#endif  // CHATMOS_EMBEDDING_HPP_
