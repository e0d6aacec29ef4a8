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

#include <stdexcept>

#include "bfmdp/learners.hpp"

namespace bfmdp {

Exploration sample_exploration_general(const ActionSetTable& active, Rng& rng) {
  const MdpShape& shape = active.shape();
  Exploration out{Policy(shape.width, shape.horizon), RandomizedStageProfile(shape)};
  for (int stage = 0; stage < shape.horizon; ++stage) {
    for (int level = 0; level < shape.width; ++level) {
      const auto& set = active.at(level, stage);
      if (set.empty()) throw std::invalid_argument("sample_exploration_general: empty action set");
      out.actions.set(level, stage, set[rng.below(set.size())]);
      const double mass = 1.0 / static_cast<double>(set.size());
      for (Action a : set) out.profile.set(level, stage, a, mass);
    }
  }
  return out;
}

Exploration sample_exploration_ordered(const ActionSetTable& active, const std::vector<ActionOrder>& ordering,
                                       Rng& rng) {
  const MdpShape& shape = active.shape();
  if (shape.width > shape.horizon) throw std::invalid_argument("sample_exploration_ordered: requires k <= H");
  if (ordering.size() != shape.num_states())
    throw std::invalid_argument("sample_exploration_ordered: one order per state required");
  const double explore = static_cast<double>(shape.width) / (2.0 * shape.horizon);
  Exploration out{Policy(shape.width, shape.horizon), RandomizedStageProfile(shape)};
  std::vector<int> rank(static_cast<std::size_t>(shape.num_actions));
  for (int stage = 0; stage < shape.horizon; ++stage) {
    for (int level = 0; level < shape.width; ++level) {
      const auto& set = active.at(level, stage);
      if (set.empty()) throw std::invalid_argument("sample_exploration_ordered: empty action set");
      const ActionOrder& order = ordering[static_cast<std::size_t>(stage) * shape.width + level];
      for (std::size_t pos = 0; pos < order.size(); ++pos) rank[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos);
      Action maximal = set.front();
      for (Action a : set)
        if (rank[static_cast<std::size_t>(a)] > rank[static_cast<std::size_t>(maximal)]) maximal = a;

      const bool uniform = rng.uniform() < explore;
      const Action drawn = set[rng.below(set.size())];
      out.actions.set(level, stage, uniform ? drawn : maximal);

      const double each = explore / static_cast<double>(set.size());
      for (Action a : set) out.profile.set(level, stage, a, each);
      out.profile.set(level, stage, maximal, each + (1.0 - explore));
    }
  }
  return out;
}

Exploration sample_exploration(Variant variant, const ActionSetTable& active, const Environment& env, Rng& rng) {
  if (variant == Variant::General) return sample_exploration_general(active, rng);
  if (!env.ordered()) throw std::invalid_argument("ordered exploration needs an ordered instance");
  const MdpShape& shape = env.shape();
  std::vector<ActionOrder> ordering;
  ordering.reserve(shape.num_states());
  for (int stage = 0; stage < shape.horizon; ++stage)
    for (int level = 0; level < shape.width; ++level) ordering.push_back(env.order(level, stage));
  return sample_exploration_ordered(active, ordering, rng);
}

}  // namespace bfmdp
