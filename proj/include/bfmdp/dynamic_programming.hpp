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

// Exact oracles by backward and forward induction over stages.

#include <vector>

#include "bfmdp/mdp.hpp"

namespace bfmdp {

// V_{l,i}(pi) for every state.
StateTable value_table(const LayeredMdp& mdp, const Policy& policy);

// V(pi) at the start state.
double policy_value(const LayeredMdp& mdp, const Policy& policy);

// V_{level,stage} of the policy's tail from stage onward.
double conditional_value(const LayeredMdp& mdp, const Policy& tail_policy, int level, int stage);

// Expected total reward of a randomized per-state policy.
double profile_value(const LayeredMdp& mdp, const RandomizedStageProfile& profile);

struct OptimalSolution {
  Policy policy;
  double value = 0.0;
  StateTable values;  // Opt_{l,i}
};

// Actions within this distance of the best Q value count as tied; ties go to
// the lowest action index.
inline constexpr double kOptimalTieTolerance = 1e-12;

OptimalSolution optimal_policy(const LayeredMdp& mdp);

// Q_{l,i}: probability that the profile visits (l, i).
StateTable visitation_probabilities(const LayeredMdp& mdp, const RandomizedStageProfile& profile);
StateTable visitation_probabilities(const LayeredMdp& mdp, const Policy& policy);

// Q values of one stage, laid out level * num_actions + action, given the
// next stage's values (ignored at the final stage).
std::vector<double> stage_q_values(const LayeredMdp& mdp, int stage, std::span<const double> next_value);

}  // namespace bfmdp
