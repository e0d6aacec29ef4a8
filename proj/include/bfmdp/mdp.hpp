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

// Layered episodic MDP model.
//
// States are (level, stage) pairs with level in [0, width) and stage in
// [0, horizon). Level 0 is the lowest level; for ordered MDPs transitions never
// move to a higher level. Transitions only connect consecutive stages, so the
// final stage carries rewards but no kernel.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bfmdp/distribution.hpp"

namespace bfmdp {

using Action = int;

struct MdpShape {
  int horizon = 0;      // H, number of stages
  int width = 0;        // k, levels per stage
  int num_actions = 0;  // A, actions per state

  std::size_t states_per_stage() const { return static_cast<std::size_t>(width); }
  std::size_t rows_per_stage() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(num_actions);
  }
  std::size_t num_states() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(horizon);
  }
  std::size_t num_state_actions() const { return num_states() * static_cast<std::size_t>(num_actions); }
  bool operator==(const MdpShape&) const = default;
};

// Model of a single (stage, level, action) triple.
struct StateActionModel {
  DiscreteDistribution reward;
  // p(. | level, action) over next-stage levels; empty at the final stage.
  std::vector<double> transition;
  // Optional reward/transition coupling: row j is the next-level distribution
  // conditioned on drawing reward.support[j]. Empty means the transition is
  // drawn independently of the reward. The marginal of the rows must equal
  // `transition`.
  std::vector<std::vector<double>> transition_given_reward;

  bool coupled() const { return !transition_given_reward.empty(); }
  bool operator==(const StateActionModel&) const = default;
};

// Known per-state total order on actions: actions listed from least to
// greatest, so back() is the maximal action.
using ActionOrder = std::vector<Action>;

struct LayeredMdpData {
  MdpShape shape;
  int start_level = 0;
  // Indexed (stage * width + level) * num_actions + action.
  std::vector<StateActionModel> models;
  // Present iff the instance claims the ordered property; indexed
  // stage * width + level.
  std::optional<std::vector<ActionOrder>> ordering;

  bool operator==(const LayeredMdpData&) const = default;
};

// Immutable episodic MDP. Construction checks array shapes only; semantic
// invariants are reported by validate().
class LayeredMdp {
 public:
  explicit LayeredMdp(LayeredMdpData data);

  const MdpShape& shape() const { return data_.shape; }
  int horizon() const { return data_.shape.horizon; }
  int width() const { return data_.shape.width; }
  int num_actions() const { return data_.shape.num_actions; }
  int start_level() const { return data_.start_level; }
  bool ordered() const { return data_.ordering.has_value(); }
  const LayeredMdpData& data() const { return data_; }

  const StateActionModel& model(int level, int stage, Action action) const;
  const DiscreteDistribution& reward(int level, int stage, Action action) const {
    return model(level, stage, action).reward;
  }
  double reward_mean(int level, int stage, Action action) const {
    return reward_means_[index(level, stage, action)];
  }
  // p_stage(next | level, action); only valid for stage < horizon - 1.
  double transition(int level, int stage, Action action, int next) const;

  // Per-stage arrays laid out for the kernels (see kernels.hpp): rows are
  // level * num_actions + action.
  std::span<const double> stage_reward_means(int stage) const;
  std::span<const double> stage_matrix(int stage) const;

  const ActionOrder& order(int level, int stage) const;
  // Position of `action` in the known order (higher = closer to maximal).
  int rank(int level, int stage, Action action) const;

  // Sampling tables used by the simulator.
  struct Categorical {
    std::uint32_t offset = 0;
    std::uint32_t count = 0;
  };
  struct Sampler {
    Categorical reward;                   // into sample_values/sample_cdf
    Categorical transition;               // into successor/successor_cdf
    std::uint32_t coupled_offset = 0;     // first of the per-support-point Categoricals in coupled_
    bool coupled = false;
  };
  const Sampler& sampler(int level, int stage, Action action) const {
    return samplers_[index(level, stage, action)];
  }
  // Draw helpers; each maps one uniform to an outcome. draw_reward reports
  // which support point was drawn so a coupled transition can condition on it.
  double draw_reward(const Sampler& sampler, double u, std::uint32_t& support_slot) const;
  int draw_next(const Sampler& sampler, std::uint32_t support_slot, double u) const;

  std::size_t index(int level, int stage, Action action) const {
    return (static_cast<std::size_t>(stage) * static_cast<std::size_t>(data_.shape.width) +
            static_cast<std::size_t>(level)) *
               static_cast<std::size_t>(data_.shape.num_actions) +
           static_cast<std::size_t>(action);
  }

 private:
  void build_caches();
  void add_reward_table(const DiscreteDistribution& reward, Categorical& out);
  void add_successor_table(std::span<const double> probs, Categorical& out);

  LayeredMdpData data_;
  std::vector<double> reward_means_;
  std::vector<double> stage_matrices_;  // (H-1) blocks of width * rows
  std::vector<int> ranks_;
  std::vector<Sampler> samplers_;
  std::vector<double> sample_values_;
  std::vector<std::uint32_t> sample_slot_;
  std::vector<double> sample_cdf_;
  std::uint32_t reward_stride_ = 1;     // padded length of every reward table
  std::uint32_t successor_stride_ = 1;  // padded length of every successor table
  std::vector<std::int32_t> successor_;
  std::vector<double> successor_cdf_;
  std::vector<Categorical> coupled_;
};

// Deterministic policy: a width x horizon matrix of actions.
class Policy {
 public:
  Policy() = default;
  Policy(int width, int horizon, Action fill = 0);

  int width() const { return width_; }
  int horizon() const { return horizon_; }
  Action operator()(int level, int stage) const {
    return actions_[static_cast<std::size_t>(stage) * static_cast<std::size_t>(width_) +
                    static_cast<std::size_t>(level)];
  }
  void set(int level, int stage, Action action);
  std::span<const std::uint16_t> raw() const { return actions_; }

  // Every entry in [0, num_actions).
  bool well_formed(const MdpShape& shape) const;

  // Text form: one row per level (level 0 first), actions separated by
  // spaces, rows separated by ';'. Example for width 2, horizon 3: "0 1 0;2 2 1".
  std::string to_string() const;
  static Policy parse(std::string_view text);

  bool operator==(const Policy&) const = default;

 private:
  int width_ = 0;
  int horizon_ = 0;
  std::vector<std::uint16_t> actions_;
};

struct PolicyHash {
  std::size_t operator()(const Policy& policy) const noexcept;
};

// Per-state action distributions, used to represent randomized exploration
// policies exactly.
class RandomizedStageProfile {
 public:
  RandomizedStageProfile(const MdpShape& shape);
  static RandomizedStageProfile deterministic(const MdpShape& shape, const Policy& policy);

  const MdpShape& shape() const { return shape_; }
  double probability(int level, int stage, Action action) const { return probs_[index(level, stage, action)]; }
  void set(int level, int stage, Action action, double p) { probs_[index(level, stage, action)] = p; }
  // Distribution at one state, length num_actions.
  std::span<const double> at(int level, int stage) const;
  std::span<double> at(int level, int stage);
  // Largest |sum - 1| over states.
  double max_normalization_error() const;

 private:
  std::size_t index(int level, int stage, Action action) const {
    return (static_cast<std::size_t>(stage) * static_cast<std::size_t>(shape_.width) +
            static_cast<std::size_t>(level)) *
               static_cast<std::size_t>(shape_.num_actions) +
           static_cast<std::size_t>(action);
  }
  MdpShape shape_;
  std::vector<double> probs_;
};

// Dense (level, stage) table of reals.
class StateTable {
 public:
  StateTable() = default;
  StateTable(int width, int horizon, double fill = 0.0)
      : width_(width), horizon_(horizon),
        values_(static_cast<std::size_t>(width) * static_cast<std::size_t>(horizon), fill) {}
  int width() const { return width_; }
  int horizon() const { return horizon_; }
  double& operator()(int level, int stage) { return values_[offset(level, stage)]; }
  double operator()(int level, int stage) const { return values_[offset(level, stage)]; }
  // All levels of one stage.
  std::span<double> stage(int stage) {
    return std::span<double>(values_).subspan(static_cast<std::size_t>(stage) * width_, width_);
  }
  std::span<const double> stage(int stage) const {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(stage) * width_, width_);
  }

 private:
  std::size_t offset(int level, int stage) const {
    return static_cast<std::size_t>(stage) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(level);
  }
  int width_ = 0;
  int horizon_ = 0;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  enum class Kind {
    Shape,
    StartLevel,
    RewardDistribution,
    KernelEntry,
    KernelRowSum,
    Coupling,
    TotalRewardBound,
    OrderingPermutation,
    OrderedDownward,     // p(s | l, a) > 0 for some s > l
    OrderedStayMonotone  // p(l | l, a) > p(l | l, b) although a precedes b
  };
  Kind kind;
  int stage = -1;
  int level = -1;
  Action action = -1;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind kind) const;
  std::string summary() const;
};

ValidationReport validate(const LayeredMdp& mdp);

// Largest total reward any deterministic policy can realize along any path of
// positive probability from the start state (respecting reward/transition
// coupling). validate() requires this to be at most 1 + 1e-12.
double max_realizable_reward(const LayeredMdp& mdp);

std::string_view to_string(Violation::Kind kind);

}  // namespace bfmdp
