// Copyright 2026 The bfmdp Authors.
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

#pragma once

#include <cstdint>
#include <random>

namespace bfmdp {

// Seeded random stream used by every simulator and learner.
//
// The generator family is std::mt19937_64 seeded directly with a 64-bit value;
// its output sequence is fixed by the C++ standard. Uniform doubles are built
// from the top 53 bits of one engine output (x >> 11) * 2^-53, so every
// uniform() call consumes exactly one engine output and the mapping does not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); consumes one uniform(). n must be positive.
  std::size_t below(std::size_t n) {
    const auto index = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return index < n ? index : n - 1;
  }

  // Standard exponential variate, -log(1 - u).
  double exponential();

  std::uint64_t next_u64() { return engine_(); }

  // Seed of an independent child stream: SplitMix64 finalizer applied to
  // (seed, stream). Used to derive per-cell environment and learner seeds.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bfmdp
