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

#include "bfmdp/dynamic_programming.hpp"

#include <stdexcept>

#include "bfmdp/kernels.hpp"

namespace bfmdp {

namespace {

kernels::StageShape stage_shape(const MdpShape& shape) {
  return {shape.rows_per_stage(), static_cast<std::size_t>(shape.width)};
}

void check_policy(const LayeredMdp& mdp, const Policy& policy) {
  if (!policy.well_formed(mdp.shape())) throw std::invalid_argument("policy does not fit the MDP");
}

// Backward pass from the final stage down to `first_stage`, with per-stage
// state values reduced from the Q rows by `reduce(stage, q, out)`.
template <typename Reduce>
StateTable backward(const LayeredMdp& mdp, int first_stage, Reduce&& reduce) {
  const MdpShape& shape = mdp.shape();
  StateTable values(shape.width, shape.horizon, 0.0);
  std::vector<double> q(shape.rows_per_stage());
  const kernels::KernelTable& k = kernels::active();
  for (int stage = shape.horizon - 1; stage >= first_stage; --stage) {
    if (stage + 1 == shape.horizon) {
      auto means = mdp.stage_reward_means(stage);
      q.assign(means.begin(), means.end());
    } else {
      k.backup(stage_shape(shape), mdp.stage_matrix(stage), mdp.stage_reward_means(stage), values.stage(stage + 1), q);
    }
    reduce(stage, std::span<const double>(q), values.stage(stage));
  }
  return values;
}

}  // namespace

std::vector<double> stage_q_values(const LayeredMdp& mdp, int stage, std::span<const double> next_value) {
  const MdpShape& shape = mdp.shape();
  auto means = mdp.stage_reward_means(stage);
  std::vector<double> q(means.begin(), means.end());
  if (stage + 1 < shape.horizon)
    kernels::active().backup(stage_shape(shape), mdp.stage_matrix(stage), means, next_value, q);
  return q;
}

StateTable value_table(const LayeredMdp& mdp, const Policy& policy) {
  check_policy(mdp, policy);
  const int A = mdp.num_actions();
  return backward(mdp, 0, [&](int stage, std::span<const double> q, std::span<double> out) {
    for (int level = 0; level < mdp.width(); ++level)
      out[static_cast<std::size_t>(level)] = q[static_cast<std::size_t>(level * A + policy(level, stage))];
  });
}

double policy_value(const LayeredMdp& mdp, const Policy& policy) {
  return value_table(mdp, policy)(mdp.start_level(), 0);
}

double conditional_value(const LayeredMdp& mdp, const Policy& tail_policy, int level, int stage) {
  check_policy(mdp, tail_policy);
  if (stage < 0 || stage >= mdp.horizon() || level < 0 || level >= mdp.width())
    throw std::out_of_range("conditional_value: state outside the MDP");
  const int A = mdp.num_actions();
  StateTable values = backward(mdp, stage, [&](int i, std::span<const double> q, std::span<double> out) {
    for (int l = 0; l < mdp.width(); ++l)
      out[static_cast<std::size_t>(l)] = q[static_cast<std::size_t>(l * A + tail_policy(l, i))];
  });
  return values(level, stage);
}

double profile_value(const LayeredMdp& mdp, const RandomizedStageProfile& profile) {
  if (!(profile.shape() == mdp.shape())) throw std::invalid_argument("profile does not fit the MDP");
  const int A = mdp.num_actions();
  StateTable values = backward(mdp, 0, [&](int stage, std::span<const double> q, std::span<double> out) {
    for (int level = 0; level < mdp.width(); ++level) {
      auto dist = profile.at(level, stage);
      double v = 0.0;
      for (int a = 0; a < A; ++a) v += dist[static_cast<std::size_t>(a)] * q[static_cast<std::size_t>(level * A + a)];
      out[static_cast<std::size_t>(level)] = v;
    }
  });
  return values(mdp.start_level(), 0);
}

OptimalSolution optimal_policy(const LayeredMdp& mdp) {
  const int A = mdp.num_actions();
  OptimalSolution solution;
  solution.policy = Policy(mdp.width(), mdp.horizon());
  solution.values = backward(mdp, 0, [&](int stage, std::span<const double> q, std::span<double> out) {
    for (int level = 0; level < mdp.width(); ++level) {
      const double* row = q.data() + static_cast<std::size_t>(level * A);
      double best = row[0];
      for (int a = 1; a < A; ++a) best = std::max(best, row[a]);
      int chosen = 0;
      while (row[chosen] < best - kOptimalTieTolerance) ++chosen;
      solution.policy.set(level, stage, chosen);
      out[static_cast<std::size_t>(level)] = best;
    }
  });
  solution.value = solution.values(mdp.start_level(), 0);
  return solution;
}

StateTable visitation_probabilities(const LayeredMdp& mdp, const RandomizedStageProfile& profile) {
  if (!(profile.shape() == mdp.shape())) throw std::invalid_argument("profile does not fit the MDP");
  const MdpShape& shape = mdp.shape();
  const int A = shape.num_actions;
  StateTable q(shape.width, shape.horizon, 0.0);
  q(mdp.start_level(), 0) = 1.0;
  std::vector<double> weight(shape.rows_per_stage());
  const kernels::KernelTable& k = kernels::active();
  for (int stage = 0; stage + 1 < shape.horizon; ++stage) {
    for (int level = 0; level < shape.width; ++level) {
      auto dist = profile.at(level, stage);
      const double mass = q(level, stage);
      for (int a = 0; a < A; ++a)
        weight[static_cast<std::size_t>(level * A + a)] = mass * dist[static_cast<std::size_t>(a)];
    }
    k.push(stage_shape(shape), mdp.stage_matrix(stage), weight, q.stage(stage + 1));
  }
  return q;
}

StateTable visitation_probabilities(const LayeredMdp& mdp, const Policy& policy) {
  check_policy(mdp, policy);
  return visitation_probabilities(mdp, RandomizedStageProfile::deterministic(mdp.shape(), policy));
}

}  // namespace bfmdp
