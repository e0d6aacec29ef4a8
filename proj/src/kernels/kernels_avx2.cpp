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

#include <immintrin.h>

#include <cassert>

#include "bfmdp/kernels.hpp"

namespace bfmdp::kernels::avx2 {

namespace {

double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

}  // namespace

void backup(StageShape shape, std::span<const double> matrix,
            std::span<const double> bias, std::span<const double> next_value,
            std::span<double> out) {
  assert(matrix.size() >= shape.rows * shape.successors);
  assert(bias.size() >= shape.rows && out.size() >= shape.rows);
  const std::size_t rows = shape.rows;
  const std::size_t vector_rows = rows - rows % 4;
  const double* m = matrix.data();

  std::size_t r = 0;
  for (; r < vector_rows; r += 4) {
    __m256d acc = _mm256_loadu_pd(bias.data() + r);
    for (std::size_t s = 0; s < shape.successors; ++s) {
      const __m256d v = _mm256_set1_pd(next_value[s]);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(m + s * rows + r), v, acc);
    }
    _mm256_storeu_pd(out.data() + r, acc);
  }
  for (; r < rows; ++r) {
    double acc = bias[r];
    for (std::size_t s = 0; s < shape.successors; ++s)
      acc += m[s * rows + r] * next_value[s];
    out[r] = acc;
  }
}

void push(StageShape shape, std::span<const double> matrix,
          std::span<const double> weight, std::span<double> out) {
  assert(matrix.size() >= shape.rows * shape.successors);
  assert(weight.size() >= shape.rows && out.size() >= shape.successors);
  const std::size_t rows = shape.rows;
  const std::size_t vector_rows = rows - rows % 4;
  for (std::size_t s = 0; s < shape.successors; ++s) {
    const double* column = matrix.data() + s * rows;
    __m256d acc = _mm256_setzero_pd();
    std::size_t r = 0;
    for (; r < vector_rows; r += 4) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(weight.data() + r),
                            _mm256_loadu_pd(column + r), acc);
    }
    double total = horizontal_sum(acc);
    for (; r < rows; ++r) total += weight[r] * column[r];
    out[s] = total;
  }
}

}  // namespace bfmdp::kernels::avx2
