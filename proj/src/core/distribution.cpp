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

#include "bfmdp/distribution.hpp"

#include <cmath>
#include <sstream>

namespace bfmdp {

DiscreteDistribution DiscreteDistribution::point(double value) {
  return {{value}, {1.0}};
}

DiscreteDistribution DiscreteDistribution::bernoulli(double p_one) {
  if (p_one <= 0.0) return point(0.0);
  if (p_one >= 1.0) return point(1.0);
  return {{0.0, 1.0}, {1.0 - p_one, p_one}};
}

double DiscreteDistribution::mean() const {
  double total = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) total += support[j] * probs[j];
  return total;
}

double DiscreteDistribution::max_value() const {
  double best = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j)
    if (probs[j] > 0.0 && support[j] > best) best = support[j];
  return best;
}

std::optional<std::string> DiscreteDistribution::problem(double tolerance) const {
  if (support.empty()) return "empty support";
  if (support.size() != probs.size()) return "support and probability lengths differ";
  double total = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (!std::isfinite(support[j]) || support[j] < 0.0) {
      std::ostringstream out;
      out << "support value " << support[j] << " is negative or non-finite";
      return out.str();
    }
    if (j > 0 && !(support[j] > support[j - 1])) return "support is not strictly ascending";
    if (!(probs[j] >= 0.0 && probs[j] <= 1.0)) return "probability outside [0, 1]";
    total += probs[j];
  }
  if (std::abs(total - 1.0) > tolerance) {
    std::ostringstream out;
    out.precision(17);
    out << "probabilities sum to " << total;
    return out.str();
  }
  return std::nullopt;
}

}  // namespace bfmdp
