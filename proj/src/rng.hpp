// Copyright 2026 The vczsim Authors
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

/// @file rng.hpp
/// Counter-based random streams.  Every shot owns an independent stream
/// derived from (seed, circuit tag, repetition, shot), so results do not
/// depend on execution order or worker count.

#pragma once

#include <cstdint>
#include <string_view>

namespace vcz {

/// splitmix64 finalizer; statistically solid for seeding and small streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// FNV-1a hash of a circuit tag string.
constexpr std::uint64_t circuit_tag(std::string_view label) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

/// Identifies one (circuit, repetition) simulation stream.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t circuit = 0;     // circuit_tag of the canonical circuit label
  std::uint64_t repetition = 0;
};

/// Per-shot generator: a splitmix64 sequence whose initial state mixes the
/// stream key with the shot counter.
class ShotRng {
 public:
  ShotRng(const StreamKey& key, std::uint64_t shot) {
    std::uint64_t s = splitmix64(key.seed ^ 0x243f6a8885a308d3ull);
    s = splitmix64(s ^ key.circuit);
    s = splitmix64(s ^ key.repetition);
    s = splitmix64(s ^ shot);
    state_ = id_ = s;
  }

  std::uint64_t stream_id() const { return id_; }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// +1 with probability p_plus, else -1.
  int born_sign(double p_plus) { return uniform() < p_plus ? +1 : -1; }

  /// Uniform integer in [0, n).
  int uniform_int(int n) {
    const int v = static_cast<int>(uniform() * n);
    return v < n ? v : n - 1;
  }

 private:
  std::uint64_t state_;
  std::uint64_t id_;
};

}  // namespace vcz
