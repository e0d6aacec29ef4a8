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

// Independent oracles for the tests. None of these go through the
// dynamic-programming code: they walk the raw per-state models directly.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "bfmdp/mdp.hpp"

namespace bfmdp::testing {

// Expected total reward by enumerating every (reward, next level) outcome of
// every stage. Exponential in H; fine for the small instances used here.
inline double enumerate_value(const LayeredMdp& mdp, const Policy& policy, int level, int stage) {
  const StateActionModel& m = mdp.model(level, stage, policy(level, stage));
  double total = 0.0;
  const bool last = stage + 1 == mdp.horizon();
  for (std::size_t j = 0; j < m.reward.size(); ++j) {
    const double p = m.reward.probs[j];
    if (p == 0.0) continue;
    double tail = 0.0;
    if (!last) {
      const std::vector<double>& row = m.coupled() ? m.transition_given_reward[j] : m.transition;
      for (std::size_t s = 0; s < row.size(); ++s)
        if (row[s] > 0.0) tail += row[s] * enumerate_value(mdp, policy, static_cast<int>(s), stage + 1);
    }
    total += p * (m.reward.support[j] + tail);
  }
  return total;
}

inline double enumerate_value(const LayeredMdp& mdp, const Policy& policy) {
  return enumerate_value(mdp, policy, mdp.start_level(), 0);
}

// Calls fn on every deterministic policy of the shape (A^{kH} of them).
inline void for_each_policy(const MdpShape& shape, const std::function<void(const Policy&)>& fn) {
  Policy policy(shape.width, shape.horizon);
  const std::size_t cells = shape.num_states();
  std::vector<int> digits(cells, 0);
  while (true) {
    fn(policy);
    std::size_t c = 0;
    for (; c < cells; ++c) {
      const int level = static_cast<int>(c % shape.width);
      const int stage = static_cast<int>(c / shape.width);
      if (++digits[c] < shape.num_actions) {
        policy.set(level, stage, digits[c]);
        break;
      }
      digits[c] = 0;
      policy.set(level, stage, 0);
    }
    if (c == cells) return;
  }
}

inline double policy_count(const MdpShape& shape) {
  return std::pow(static_cast<double>(shape.num_actions), static_cast<double>(shape.num_states()));
}

// Visitation probabilities by the forward recursion written out from the
// kernel accessor, one state at a time.
inline std::vector<std::vector<double>> forward_visitation(const LayeredMdp& mdp,
                                                           const RandomizedStageProfile& profile) {
  const int H = mdp.horizon();
  const int k = mdp.width();
  std::vector<std::vector<double>> q(static_cast<std::size_t>(H), std::vector<double>(static_cast<std::size_t>(k), 0.0));
  q[0][static_cast<std::size_t>(mdp.start_level())] = 1.0;
  for (int i = 0; i + 1 < H; ++i)
    for (int l = 0; l < k; ++l)
      for (int a = 0; a < mdp.num_actions(); ++a)
        for (int s = 0; s < k; ++s)
          q[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(s)] +=
              q[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] * profile.probability(l, i, a) *
              mdp.transition(l, i, a, s);
  return q;
}

// Two-point deterministic-kernel MDP handy for hand-checked examples.
inline LayeredMdp chain_mdp(int H, int k, int A, const std::function<double(int, int, int)>& reward,
                            const std::function<int(int, int, int)>& next, int start_level = 0) {
  LayeredMdpData data;
  data.shape = {H, k, A};
  data.start_level = start_level;
  for (int i = 0; i < H; ++i)
    for (int l = 0; l < k; ++l)
      for (int a = 0; a < A; ++a) {
        StateActionModel m;
        m.reward = DiscreteDistribution::point(reward(l, i, a));
        if (i + 1 < H) {
          m.transition.assign(static_cast<std::size_t>(k), 0.0);
          m.transition[static_cast<std::size_t>(next(l, i, a))] = 1.0;
        }
        data.models.push_back(std::move(m));
      }
  return LayeredMdp(std::move(data));
}

}  // namespace bfmdp::testing
