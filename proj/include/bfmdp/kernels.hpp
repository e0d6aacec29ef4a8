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

// Dense per-stage kernels shared by the dynamic-programming oracles and UCB-VI.
//
// A stage matrix holds the transition probabilities out of every (level, action)
// row of one stage, stored successor-major: element (s, r) lives at
// matrix[s * rows + r], where r = level * num_actions + action. Each successor
// column is therefore contiguous across rows, which is what the vector variants
// stream over.

#include <cstddef>
#include <span>
#include <string_view>

namespace bfmdp::kernels {

enum class Target { Scalar, Avx2 };

struct StageShape {
  std::size_t rows = 0;        // level * action pairs
  std::size_t successors = 0;  // levels of the next stage
};

// out[r] = bias[r] + sum_s matrix[s, r] * next_value[s]
using BackupFn = void (*)(StageShape shape, std::span<const double> matrix,
                          std::span<const double> bias,
                          std::span<const double> next_value,
                          std::span<double> out);

// out[s] = sum_r weight[r] * matrix[s, r]
using PushFn = void (*)(StageShape shape, std::span<const double> matrix,
                        std::span<const double> weight, std::span<double> out);

struct KernelTable {
  Target target;
  BackupFn backup;
  PushFn push;
};

namespace scalar {
void backup(StageShape shape, std::span<const double> matrix,
            std::span<const double> bias, std::span<const double> next_value,
            std::span<double> out);
void push(StageShape shape, std::span<const double> matrix,
          std::span<const double> weight, std::span<double> out);
}  // namespace scalar

namespace avx2 {
void backup(StageShape shape, std::span<const double> matrix,
            std::span<const double> bias, std::span<const double> next_value,
            std::span<double> out);
void push(StageShape shape, std::span<const double> matrix,
          std::span<const double> weight, std::span<double> out);
}  // namespace avx2

// True when the AVX2 variants were compiled in and the CPU supports AVX2+FMA.
bool avx2_available();

// Kernel table in use. Chosen once from the CPU on first call; the environment
// variable BFMDP_KERNELS=scalar|avx2 overrides the choice.
const KernelTable& active();

// Forces a target for the rest of the process (tests, --kernels flag).
// Throws std::invalid_argument if the target is unavailable.
void select(Target target);

const KernelTable& table(Target target);

std::string_view name(Target target);
Target parse_target(std::string_view text);

}  // namespace bfmdp::kernels
