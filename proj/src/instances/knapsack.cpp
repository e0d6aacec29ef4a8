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

#include "bfmdp/instances.hpp"
#include "outcomes.hpp"

namespace bfmdp {

namespace {

void check_spec(const KnapsackSpec& spec) {
  if (spec.budget < 0) throw std::invalid_argument("knapsack spec: budget must be non-negative");
  if (spec.items.empty()) throw std::invalid_argument("knapsack spec: need at least one item");
  for (std::size_t i = 0; i < spec.items.size(); ++i) {
    const auto& item = spec.items[i];
    if (item.empty()) throw std::invalid_argument("knapsack spec: item " + std::to_string(i) + " has no outcomes");
    double total = 0.0;
    for (const KnapsackOutcome& o : item) {
      if (!(o.cost >= 0.0) || std::floor(o.cost) != o.cost || o.cost > 1e9)
        throw std::invalid_argument("knapsack spec: item " + std::to_string(i) + " has a non-integer or negative cost");
      if (!(o.reward >= 0.0) || !std::isfinite(o.reward))
        throw std::invalid_argument("knapsack spec: item " + std::to_string(i) + " has a negative reward");
      if (!(o.prob >= 0.0 && o.prob <= 1.0))
        throw std::invalid_argument("knapsack spec: item " + std::to_string(i) + " has a probability outside [0, 1]");
      total += o.prob;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("knapsack spec: item " + std::to_string(i) + " probabilities do not sum to 1");
  }
  if (spec.value_scale && !(*spec.value_scale > 0.0))
    throw std::invalid_argument("knapsack spec: value_scale must be positive");
}

LayeredMdp build(const KnapsackSpec& spec, double scale) {
  const int H = static_cast<int>(spec.items.size());
  const int width = spec.budget + 2;
  LayeredMdpData data;
  data.shape = {H, width, 2};
  data.start_level = spec.budget + 1;
  std::vector<ActionOrder> ordering;
  for (int stage = 0; stage < H; ++stage) {
    const int next_width = stage + 1 < H ? width : 0;
    for (int level = 0; level < width; ++level) {
      ordering.push_back({kKnapsackAccept, kKnapsackReject});
      data.models.push_back(detail::model_from_outcomes({{0.0, level, 1.0}}, next_width));
      std::vector<detail::Outcome> accept;
      if (level == 0) {
        accept.push_back({0.0, 0, 1.0});
      } else {
        const int remaining = level - 1;
        for (const KnapsackOutcome& o : spec.items[static_cast<std::size_t>(stage)]) {
          const int cost = static_cast<int>(std::min(o.cost, 1e9));
          if (cost <= remaining)
            accept.push_back({o.reward * scale, remaining - cost + 1, o.prob});
          else
            accept.push_back({0.0, 0, o.prob});
        }
      }
      data.models.push_back(detail::model_from_outcomes(accept, next_width));
    }
  }
  data.ordering = std::move(ordering);
  return LayeredMdp(std::move(data));
}

}  // namespace

double knapsack_value_scale(const KnapsackSpec& spec) {
  check_spec(spec);
  if (spec.value_scale) return *spec.value_scale;
  const double best = max_realizable_reward(build(spec, 1.0));
  return best > 1.0 ? 1.0 / best : 1.0;
}

LayeredMdp compile_knapsack(const KnapsackSpec& spec) { return build(spec, knapsack_value_scale(spec)); }

}  // namespace bfmdp
