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

#include "bfmdp/kernels.hpp"

#include <cassert>

namespace bfmdp::kernels::scalar {

void backup(StageShape shape, std::span<const double> matrix,
            std::span<const double> bias, std::span<const double> next_value,
            std::span<double> out) {
  assert(matrix.size() >= shape.rows * shape.successors);
  assert(bias.size() >= shape.rows && out.size() >= shape.rows);
  assert(next_value.size() >= shape.successors);
  for (std::size_t r = 0; r < shape.rows; ++r) out[r] = bias[r];
  for (std::size_t s = 0; s < shape.successors; ++s) {
    const double v = next_value[s];
    const double* column = matrix.data() + s * shape.rows;
    for (std::size_t r = 0; r < shape.rows; ++r) out[r] += column[r] * v;
  }
}

void push(StageShape shape, std::span<const double> matrix,
          std::span<const double> weight, std::span<double> out) {
  assert(matrix.size() >= shape.rows * shape.successors);
  assert(weight.size() >= shape.rows && out.size() >= shape.successors);
  for (std::size_t s = 0; s < shape.successors; ++s) {
    const double* column = matrix.data() + s * shape.rows;
    double acc = 0.0;
    for (std::size_t r = 0; r < shape.rows; ++r) acc += weight[r] * column[r];
    out[s] = acc;
  }
}

}  // namespace bfmdp::kernels::scalar
