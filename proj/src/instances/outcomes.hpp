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

#include <map>
#include <vector>

#include "bfmdp/mdp.hpp"

namespace bfmdp::detail {

// Joint (reward, next level) outcome of one state-action pair.
struct Outcome {
  double reward = 0.0;
  int next = 0;
  double prob = 0.0;
};

// Builds a model from joint outcomes: equal rewards merge into one support
// point, and a coupling table is attached when the next level depends on the
// reward. `width` is the next stage's width, 0 at the final stage.
inline StateActionModel model_from_outcomes(const std::vector<Outcome>& outcomes, int width) {
  std::map<double, std::vector<double>> joint;
  for (const Outcome& o : outcomes) {
    if (!(o.prob > 0.0)) continue;
    auto& row = joint[o.reward];
    if (row.empty()) row.assign(static_cast<std::size_t>(width > 0 ? width : 1), 0.0);
    row[static_cast<std::size_t>(width > 0 ? o.next : 0)] += o.prob;
  }
  StateActionModel m;
  for (const auto& [reward, row] : joint) {
    double mass = 0.0;
    for (double p : row) mass += p;
    m.reward.support.push_back(reward);
    m.reward.probs.push_back(mass);
  }
  if (width == 0) return m;
  m.transition.assign(static_cast<std::size_t>(width), 0.0);
  bool dependent = false;
  for (const auto& [reward, row] : joint) {
    std::vector<double> conditional(row.size());
    double mass = 0.0;
    for (double p : row) mass += p;
    for (std::size_t s = 0; s < row.size(); ++s) {
      conditional[s] = row[s] / mass;
      m.transition[s] += row[s];
    }
    m.transition_given_reward.push_back(std::move(conditional));
  }
  for (const auto& row : m.transition_given_reward)
    for (std::size_t s = 0; s < row.size(); ++s)
      if (row[s] != m.transition_given_reward.front()[s]) dependent = true;
  if (!dependent) {
    m.transition = m.transition_given_reward.front();
    m.transition_given_reward.clear();
  }
  return m;
}

}  // namespace bfmdp::detail
