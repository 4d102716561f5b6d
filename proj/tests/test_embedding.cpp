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
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "chatmos/errors.hpp"

using namespace chatmos;

TEST_CASE("single token embeds to a unit basis vector") {
  HashedEmbeddingProvider provider(384);
  const auto v = provider.embed("lag");
  const std::size_t expected =
      HashedEmbeddingProvider::fnv1a64("lag") % 384;
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(v[i] == (i == expected ? 1.0f : 0.0f));
  }
}

TEST_CASE("vectors are L2 normalized") {
  HashedEmbeddingProvider provider(384);
  const auto v = provider.embed("the stream keeps buffering");
  double norm2 = 0.0;
  for (float x : v) norm2 += static_cast<double>(x) * x;
  CHECK(std::abs(norm2 - 1.0) < 1e-6);
}

TEST_CASE("token multiplicity accumulates") {
  HashedEmbeddingProvider provider(384);
  // "lag lag" piles weight on one coordinate; the normalized result is the
  // same basis vector as a single "lag".
  CHECK(provider.embed("lag lag") == provider.embed("lag"));
}

TEST_CASE("batch preserves order") {
  HashedEmbeddingProvider provider(384);
  const auto batch = provider.embed_batch({"lag", "buffering"});
  REQUIRE(batch.size() == 2);
  CHECK(batch[0] == provider.embed("lag"));
  CHECK(batch[1] == provider.embed("buffering"));
}

TEST_CASE("empty input is rejected") {
  HashedEmbeddingProvider provider(384);
  CHECK_THROWS_AS(provider.embed(""), ProviderError);
  CHECK_THROWS_AS(provider.embed("   "), ProviderError);
  CHECK(provider.embed_batch({}).empty());
}

TEST_CASE("dimension and identity") {
  HashedEmbeddingProvider provider(384);
  CHECK(provider.dimension() == 384);
  CHECK(provider.describe() == "hashed-bow/fnv1a64/d384");
  CHECK_THROWS_AS(HashedEmbeddingProvider(0), ConfigError);
}

TEST_CASE("cosine of identical vectors is 1") {
  HashedEmbeddingProvider provider(384);
  const auto v = provider.embed("stream quality is bad");
  CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cosine of disjoint single tokens is 0 without collisions") {
  HashedEmbeddingProvider provider(384);
  const auto a = provider.embed("lag");
  const auto b = provider.embed("pizza");
  const bool collide = HashedEmbeddingProvider::fnv1a64("lag") % 384 ==
                       HashedEmbeddingProvider::fnv1a64("pizza") % 384;
  REQUIRE_FALSE(collide);
  CHECK(cosine(a, b) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("paper filter example similarity") {
  // "twitch lagging or sum" vs "twitch keeps lagging for me": two shared
  // tokens, sizes 4 and 5, cos = 2/sqrt(20) with no bucket collisions.
  HashedEmbeddingProvider provider(384);
  const auto c = provider.embed("twitch lagging or sum");
  const auto a = provider.embed("twitch keeps lagging for me");
  CHECK(cosine(c, a) ==
        doctest::Approx(2.0 / std::sqrt(20.0)).epsilon(1e-9));
}

TEST_CASE("cosine properties over random bags") {
  HashedEmbeddingProvider provider(384);
  std::mt19937_64 rng(23);
  const char* words[] = {"lag",   "stream", "video", "chat",  "is",
                         "the",   "bad",    "today", "again", "buffer"};
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_int_distribution<std::size_t> pick(0, 9);
  for (int trial = 0; trial < 200; ++trial) {
    std::string s1, s2;
    for (int i = 0, n = len(rng); i < n; ++i) {
      s1 += (i ? " " : "");
      s1 += words[pick(rng)];
    }
    for (int i = 0, n = len(rng); i < n; ++i) {
      s2 += (i ? " " : "");
      s2 += words[pick(rng)];
    }
    const auto u = provider.embed(s1);
    const auto v = provider.embed(s2);
    const double c = cosine(u, v);
    CHECK(c == cosine(v, u));  // symmetric, identical arithmetic
    CHECK(c >= -1e-12);        // counts are non-negative
    CHECK(c <= 1.0 + 1e-12);
  }
}

TEST_CASE("cosine input validation") {
  EmbeddingVector a{1.0f, 0.0f};
  EmbeddingVector b{1.0f, 0.0f, 0.0f};
  CHECK_THROWS_AS(cosine(a, b), std::invalid_argument);
  EmbeddingVector zero{0.0f, 0.0f};
  EmbeddingVector one{1.0f, 0.0f};
  CHECK_THROWS_AS(cosine(zero, one), std::invalid_argument);
}
