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

// Bandit-feedback learners (explore-then-refine, its ordered variant and the
// doubling wrapper) and a UCB-VI semi-bandit baseline.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "bfmdp/mdp.hpp"
#include "bfmdp/rng.hpp"
#include "bfmdp/simulate.hpp"

namespace bfmdp {

enum class Variant { General, Ordered };

std::string_view to_string(Variant variant);

// Active action set per state, each kept sorted ascending.
class ActionSetTable {
 public:
  ActionSetTable() = default;
  // Every state starts with the full action set.
  explicit ActionSetTable(const MdpShape& shape);

  const MdpShape& shape() const { return shape_; }
  const std::vector<Action>& at(int level, int stage) const { return sets_[offset(level, stage)]; }
  std::size_t size(int level, int stage) const { return at(level, stage).size(); }
  bool contains(int level, int stage, Action action) const;
  // Replaces one set; `actions` is sorted and deduplicated. Throws on an
  // empty set or an out-of-range action.
  void set(int level, int stage, std::vector<Action> actions);

  bool all_nonempty() const;
  bool subset_of(const ActionSetTable& other) const;
  // Sum of set sizes over all states.
  std::size_t total_size() const;

  bool operator==(const ActionSetTable&) const = default;

 private:
  std::size_t offset(int level, int stage) const {
    return static_cast<std::size_t>(stage) * static_cast<std::size_t>(shape_.width) + static_cast<std::size_t>(level);
  }
  MdpShape shape_;
  std::vector<std::vector<Action>> sets_;
};

// Elimination thresholds C_{l,i}, indexed like states (level 0 is the lowest
// level, stage 0 the first stage).
class ThresholdTable {
 public:
  ThresholdTable() = default;
  ThresholdTable(int width, int horizon) : width_(width), horizon_(horizon), values_(static_cast<std::size_t>(width) * horizon, 1.0L) {}
  int width() const { return width_; }
  int horizon() const { return horizon_; }
  long double operator()(int level, int stage) const { return values_[offset(level, stage)]; }
  long double& operator()(int level, int stage) { return values_[offset(level, stage)]; }

 private:
  std::size_t offset(int level, int stage) const {
    return static_cast<std::size_t>(stage) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(level);
  }
  int width_ = 0;
  int horizon_ = 0;
  std::vector<long double> values_;
};

// C_{l,i} = (H - i + 1) (A k)^{H - i}; the same for every level. Throws
// std::overflow_error if a value is not finite in long double.
ThresholdTable thresholds_general(int H, int k, int A);

// C_{l,i} = e^{(H - i) k / H} (2 A H / k)^{l - 1} (H - i + 1)^l with 1-based l
// and i, for i < H; C_{l,H} = 1 at every level. Requires k <= H.
ThresholdTable thresholds_ordered(int H, int k, int A);

ThresholdTable thresholds_for(Variant variant, const MdpShape& shape);

struct Exploration {
  Policy actions;                    // e_{l,i}
  RandomizedStageProfile profile;    // law the actions were drawn from
};

// One uniform draw per state, states visited stage by stage and level by
// level within a stage.
Exploration sample_exploration_general(const ActionSetTable& active, Rng& rng);

// Per state: with probability k/(2H) a uniform draw from the active set,
// otherwise the maximal active action under `ordering` (orders indexed
// stage * width + level, least first). Every state consumes two uniforms: the
// coin, then the index of the uniform draw.
Exploration sample_exploration_ordered(const ActionSetTable& active, const std::vector<ActionOrder>& ordering,
                                       Rng& rng);

// Convenience overload reading the order from the environment.
Exploration sample_exploration(Variant variant, const ActionSetTable& active, const Environment& env, Rng& rng);

// Episodes played per (state, action) block: ceil(12 ln T / eps^2).
std::int64_t episodes_per_block(std::int64_t T, double epsilon);

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::int64_t needed, std::int64_t remaining);
  std::int64_t needed;
  std::int64_t remaining;
};

struct PhaseReport {
  double epsilon = 0.0;
  ActionSetTable refined;   // N_{l,i}
  Policy empirical_best;    // alpha-hat
  Policy explore;           // e
  // Phi-hat per (stage, level, action), NaN where the action was not played.
  std::vector<double> means;
  std::int64_t episodes = 0;
  bool complete = true;

  double mean(int level, int stage, Action action) const;
};

struct ExpRefOptions {
  // When false the phase must fit the remaining budget or BudgetExceeded is
  // thrown before any episode is played. When true the phase plays blocks
  // until the budget runs out; an unfinished block is discarded and the
  // report is marked incomplete.
  bool truncate = false;
  // alpha-hat for states whose block did not complete (truncated phases
  // only); defaults to action 0.
  std::optional<Policy> fallback_best;
};

// One explore-then-refine phase at accuracy epsilon. T sets the block length;
// the environment must use bandit feedback.
PhaseReport exp_ref(Environment& env, const ActionSetTable& active, double epsilon, std::int64_t T,
                    const ThresholdTable& thresholds, Variant variant, Rng& rng, const ExpRefOptions& options = {});

// Phase schedule of the doubling wrapper for full action sets.
struct DoublingSchedule {
  std::vector<double> epsilons;          // one per phase, 2^-r
  std::vector<std::int64_t> block_length;
  double epsilon_floor = 0.0;            // sqrt(H k A ln T / T)
  // Episodes the phases would use with every action active.
  std::int64_t scheduled_episodes = 0;
  // Index of the last phase, -1 when no phase runs.
  int last_phase() const { return static_cast<int>(epsilons.size()) - 1; }
};

DoublingSchedule doubling_schedule(int H, int k, int A, std::int64_t T);

struct DoublingReport {
  std::vector<PhaseReport> phases;
  Policy final_policy;
  std::int64_t exploit_episodes = 0;
};

// Runs phases at eps = 1, 1/2, ... while eps > sqrt(H k A ln T / T), feeding
// each phase's refined sets into the next, then plays the latest empirical
// best policy until the environment's budget T is spent. A phase that does not
// fit is truncated. The environment must use bandit feedback.
LearnerRun doubling(Environment& env, Variant variant, std::uint64_t seed, DoublingReport* report = nullptr);

struct UcbViOptions {
  double delta = 0.1;
};

// UCB-VI statistics: visit counts, empirical rewards and transitions, and the
// optimistic planning step over them.
class UcbViModel {
 public:
  // log_term is ln(H k A T / delta).
  UcbViModel(const MdpShape& shape, double log_term);

  // Optimistic backward induction. Q = r-hat + bonus + P-hat V, V = min(1,
  // max Q); the greedy action maximizes the unclipped Q, lowest index first.
  const Policy& plan();
  // Folds one semi-bandit episode played with `policy` into the statistics.
  void update(const Policy& policy, const EpisodeOutcome& outcome);

  // sqrt(2 log_term / max(1, n)).
  double bonus(double visits) const;
  double visits(int level, int stage, Action action) const;
  // Estimated p(next | level, action) at a stage before the last.
  double transition_estimate(int level, int stage, Action action, int next) const;
  // Clipped optimistic values and unclipped Q values of the last plan().
  const StateTable& values() const { return values_; }
  double q_value(int level, int stage, Action action) const;
  const Policy& policy() const { return policy_; }

 private:
  MdpShape shape_;
  double log_term_;
  std::size_t rows_;
  std::size_t block_;
  std::vector<double> visits_, reward_sum_, bias_, next_count_, next_estimate_, q_;
  Policy policy_;
  StateTable values_;
};

// UCB-VI with Hoeffding bonus sqrt(2 ln(H k A T / delta) / max(1, n)) and
// values clipped at 1. Needs semi-bandit feedback.
LearnerRun ucb_vi(Environment& env, const UcbViOptions& options = {});

// Plays the same policy for the whole budget.
LearnerRun fixed_policy(Environment& env, const Policy& policy);

}  // namespace bfmdp
