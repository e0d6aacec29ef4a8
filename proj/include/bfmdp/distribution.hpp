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

#include <optional>
#include <string>
#include <vector>

namespace bfmdp {

// Finite discrete distribution over non-negative reals.
struct DiscreteDistribution {
  std::vector<double> support;  // strictly ascending
  std::vector<double> probs;    // same length, sums to one

  static DiscreteDistribution point(double value);
  static DiscreteDistribution bernoulli(double p_one);

  // Exact expectation sum_j support[j] * probs[j], accumulated in index order.
  double mean() const;
  double max_value() const;
  std::size_t size() const { return support.size(); }

  // First violated invariant, if any: sizes, non-negative ascending support,
  // probabilities in [0, 1] summing to one within `tolerance`.
  std::optional<std::string> problem(double tolerance = 1e-12) const;

  bool operator==(const DiscreteDistribution&) const = default;
};

}  // namespace bfmdp
