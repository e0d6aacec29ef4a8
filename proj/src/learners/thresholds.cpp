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

#include <cmath>
#include <stdexcept>
#include <string>

#include "bfmdp/learners.hpp"

namespace bfmdp {

namespace {

void require_positive(int H, int k, int A) {
  if (H < 1 || k < 1 || A < 1) throw std::invalid_argument("thresholds: H, k and A must be positive");
}

long double power(long double base, int exponent) {
  long double result = 1.0L;
  for (int e = 0; e < exponent; ++e) result *= base;
  return result;
}

void check_finite(long double value, int level, int stage) {
  if (!std::isfinite(value))
    throw std::overflow_error("threshold at level " + std::to_string(level) + ", stage " + std::to_string(stage) +
                              " overflows long double");
}

}  // namespace

ThresholdTable thresholds_general(int H, int k, int A) {
  require_positive(H, k, A);
  ThresholdTable table(k, H);
  const long double ak = static_cast<long double>(A) * static_cast<long double>(k);
  for (int stage = 0; stage < H; ++stage) {
    const int remaining = H - 1 - stage;  // H - i
    const long double c = static_cast<long double>(remaining + 1) * power(ak, remaining);
    check_finite(c, 0, stage);
    for (int level = 0; level < k; ++level) table(level, stage) = c;
  }
  return table;
}

ThresholdTable thresholds_ordered(int H, int k, int A) {
  require_positive(H, k, A);
  if (k > H) throw std::invalid_argument("thresholds_ordered: requires k <= H");
  ThresholdTable table(k, H);
  const long double growth = 2.0L * A * H / k;
  for (int stage = 0; stage < H; ++stage) {
    const int remaining = H - 1 - stage;
    const long double head = std::exp(static_cast<long double>(remaining) * k / H);
    for (int level = 0; level < k; ++level) {
      // The last stage is pinned to 1 at every level; the closed form only
      // gives 1 there for the lowest level.
      const long double c = remaining == 0 ? 1.0L
                                           : head * power(growth, level) *
                                                 power(static_cast<long double>(remaining + 1), level + 1);
      check_finite(c, level, stage);
      table(level, stage) = c;
    }
  }
  return table;
}

ThresholdTable thresholds_for(Variant variant, const MdpShape& shape) {
  return variant == Variant::Ordered ? thresholds_ordered(shape.horizon, shape.width, shape.num_actions)
                                     : thresholds_general(shape.horizon, shape.width, shape.num_actions);
}

std::string_view to_string(Variant variant) { return variant == Variant::Ordered ? "ordered" : "general"; }

}  // namespace bfmdp
