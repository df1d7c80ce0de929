// Copyright 2026 The revrl Authors
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

#ifndef REVRL_CORE_RNG_H_
#define REVRL_CORE_RNG_H_

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace revrl {

// Counter-based deterministic random stream.
//
// A stream is identified by a 64-bit key derived from the root seed and the
// chain of fork labels that produced it. Draw i of a stream is a pure
// function of (key, i), so replaying the same call sequence from the same
// seed reproduces every draw bit for bit. Forking depends only on the key,
// never on how many draws the parent has already made.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  // Independent child stream. Same (parent key, label) gives the same stream.
  Rng fork(std::string_view label) const;
  Rng fork(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_int(std::uint64_t n);
  bool bernoulli(double p);
  double normal();
  // Marsaglia-Tsang; shape > 0, unit scale.
  double gamma(double shape);
  // Index drawn from an unnormalized non-negative weight vector.
  std::size_t categorical(std::span<const double> weights);

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

 private:
  Rng(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// SplitMix64 finalizer; exposed for hashing configuration into seeds.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_label(std::string_view label);

}  // namespace revrl

#endif  // REVRL_CORE_RNG_H_
