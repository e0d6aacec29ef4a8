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

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bfmdp/mdp.hpp"
#include "bfmdp/rng.hpp"

namespace bfmdp {

// What an episode reveals to the learner. Each level exposes everything the
// previous one does.
enum class FeedbackMode { Bandit, Trajectory, SemiBandit };

std::string_view to_string(FeedbackMode mode);
FeedbackMode parse_feedback_mode(std::string_view text);

struct VisitedState {
  int level = 0;
  int stage = 0;
  bool operator==(const VisitedState&) const = default;
};

struct EpisodeOutcome {
  double aggregate_reward = 0.0;
  std::optional<std::vector<VisitedState>> trajectory;  // mode >= Trajectory
  std::optional<std::vector<double>> step_rewards;      // mode == SemiBandit
};

// Runs one episode. Random consumption is fixed: for every stage, one uniform
// for the reward draw and then, except at the final stage, one uniform for the
// transition draw. The aggregate reward is the stage-order sum of the step
// rewards.
EpisodeOutcome simulate_episode(const LayeredMdp& mdp, const Policy& policy, FeedbackMode mode, Rng& rng);

// Same draws as simulate_episode, returning only the aggregate reward.
double simulate_aggregate(const LayeredMdp& mdp, const Policy& policy, Rng& rng);

// Episode `start_stage`..H from a forced state (level, start_stage).
double simulate_from(const LayeredMdp& mdp, const Policy& policy, int level, int start_stage, Rng& rng);

// Record of the policies a learner played: distinct policies are interned and
// the episode sequence is stored as runs of the same policy.
class LearnerRun {
 public:
  struct Segment {
    std::int64_t first_episode = 0;  // 1-based
    std::int64_t length = 0;
    std::uint32_t policy_id = 0;
  };
  struct Checkpoint {
    std::int64_t episode = 0;
    double elapsed_seconds = 0.0;
  };

  void record(const Policy& policy, std::int64_t episodes);
  void add_checkpoint(std::int64_t episode, double elapsed_seconds) {
    checkpoints_.push_back({episode, elapsed_seconds});
  }

  std::int64_t total_episodes() const { return total_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<Policy>& policies() const { return policies_; }
  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
  // Policy played in 1-based episode t.
  const Policy& policy_at(std::int64_t episode) const;

 private:
  std::vector<Policy> policies_;
  std::unordered_map<Policy, std::uint32_t, PolicyHash> ids_;
  std::vector<Segment> segments_;
  std::vector<Checkpoint> checkpoints_;
  std::int64_t total_ = 0;
};

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The learner's view of an unknown MDP: the shape, the known action ordering
// when the instance is ordered, and episodes filtered by the feedback mode.
// Every played episode is logged into a LearnerRun.
class Environment {
 public:
  Environment(const LayeredMdp& mdp, FeedbackMode mode, std::uint64_t seed, std::int64_t budget);

  const MdpShape& shape() const { return mdp_.shape(); }
  FeedbackMode mode() const { return mode_; }
  bool ordered() const { return mdp_.ordered(); }
  // Known total order at a state (ordered instances only).
  const ActionOrder& order(int level, int stage) const { return mdp_.order(level, stage); }
  int rank(int level, int stage, Action action) const { return mdp_.rank(level, stage, action); }

  std::int64_t budget() const { return budget_; }
  std::int64_t played() const { return played_; }
  std::int64_t remaining() const { return budget_ - played_; }

  // One episode with the feedback mode's filtering applied.
  EpisodeOutcome play(const Policy& policy);
  // `episodes` repetitions of the same policy; returns the sum of aggregate
  // rewards. Throws BudgetExhausted if fewer episodes remain.
  double play_block(const Policy& policy, std::int64_t episodes);

  // Records wall-clock checkpoints every `stride` episodes, measured from
  // the first episode (or from reset_clock()).
  void set_checkpoint_stride(std::int64_t stride) { stride_ = stride; }
  void reset_clock() { clock_start_ = std::chrono::steady_clock::now(); clock_started_ = true; }
  double elapsed_seconds() const;

  const LearnerRun& run() const { return run_; }
  LearnerRun take_run() { return std::move(run_); }

 private:
  void consume(const Policy& policy, std::int64_t episodes);

  const LayeredMdp& mdp_;
  FeedbackMode mode_;
  Rng rng_;
  std::int64_t budget_;
  std::int64_t played_ = 0;
  std::int64_t stride_ = 0;
  std::chrono::steady_clock::time_point clock_start_{};
  bool clock_started_ = false;
  LearnerRun run_;
};

}  // namespace bfmdp
