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

#include "bfmdp/simulate.hpp"

#include <stdexcept>
#include <string>

namespace bfmdp {

std::string_view to_string(FeedbackMode mode) {
  switch (mode) {
    case FeedbackMode::Bandit: return "bandit";
    case FeedbackMode::Trajectory: return "trajectory";
    case FeedbackMode::SemiBandit: return "semi-bandit";
  }
  return "unknown";
}

FeedbackMode parse_feedback_mode(std::string_view text) {
  if (text == "bandit") return FeedbackMode::Bandit;
  if (text == "trajectory") return FeedbackMode::Trajectory;
  if (text == "semi-bandit" || text == "semibandit") return FeedbackMode::SemiBandit;
  throw std::invalid_argument("unknown feedback mode '" + std::string(text) + "'");
}

namespace {

template <typename Visit>
double run_from(const LayeredMdp& mdp, const Policy& policy, int level, int start_stage, Rng& rng,
                Visit&& visit) {
  const int horizon = mdp.horizon();
  double total = 0.0;
  for (int stage = start_stage; stage < horizon; ++stage) {
    const Action a = policy(level, stage);
    const LayeredMdp::Sampler& sampler = mdp.sampler(level, stage, a);
    std::uint32_t slot = 0;
    const double reward = mdp.draw_reward(sampler, rng.uniform(), slot);
    visit(level, stage, reward);
    total += reward;
    if (stage + 1 < horizon) level = mdp.draw_next(sampler, slot, rng.uniform());
  }
  return total;
}

}  // namespace

EpisodeOutcome simulate_episode(const LayeredMdp& mdp, const Policy& policy, FeedbackMode mode, Rng& rng) {
  EpisodeOutcome outcome;
  if (mode == FeedbackMode::Bandit) {
    outcome.aggregate_reward = simulate_aggregate(mdp, policy, rng);
    return outcome;
  }
  std::vector<VisitedState> trajectory;
  std::vector<double> rewards;
  trajectory.reserve(static_cast<std::size_t>(mdp.horizon()));
  if (mode == FeedbackMode::SemiBandit) rewards.reserve(static_cast<std::size_t>(mdp.horizon()));
  outcome.aggregate_reward =
      run_from(mdp, policy, mdp.start_level(), 0, rng, [&](int level, int stage, double reward) {
        trajectory.push_back({level, stage});
        if (mode == FeedbackMode::SemiBandit) rewards.push_back(reward);
      });
  outcome.trajectory = std::move(trajectory);
  if (mode == FeedbackMode::SemiBandit) outcome.step_rewards = std::move(rewards);
  return outcome;
}

double simulate_aggregate(const LayeredMdp& mdp, const Policy& policy, Rng& rng) {
  return run_from(mdp, policy, mdp.start_level(), 0, rng, [](int, int, double) {});
}

double simulate_from(const LayeredMdp& mdp, const Policy& policy, int level, int start_stage, Rng& rng) {
  return run_from(mdp, policy, level, start_stage, rng, [](int, int, double) {});
}

}  // namespace bfmdp
