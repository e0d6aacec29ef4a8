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

// Instance generators: prophet inequality and posted pricing, stochastic
// knapsack, the two lower-bound families and random fixtures.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfmdp/distribution.hpp"
#include "bfmdp/mdp.hpp"
#include "bfmdp/rng.hpp"

namespace bfmdp {

// ---------------------------------------------------------------------------
// Prophet inequality / posted pricing
//
// Compiled layout: width k + 1 where level l >= 1 means l items may still be
// selected and level 0 is the exhausted, zero-reward absorbing level. The
// start level is k. There are A + 1 actions: action j < A uses threshold
// X_i's j-th support point (accept iff X_i >= threshold, or the posted price
// for pricing) and action A rejects everything. Actions are ordered by index,
// so A is maximal. With reject_action off only the A support thresholds
// remain. Reward and transition are coupled through the same X_i.

enum class ProphetProblem { Prophet, Pricing };

struct ProphetSpec {
  int H = 0;
  int k = 0;
  int A = 0;
  std::vector<DiscreteDistribution> values;  // X_1..X_H, unscaled
  double value_scale = 1.0;
  ProphetProblem problem = ProphetProblem::Prophet;
  bool reject_action = true;
};

// Uniform on {0, 1/(A-1), ..., 1} at every stage, value_scale 1/k.
ProphetSpec prophet_uniform(int H, int k, int A);
// Per stage: A sorted uniform support points on [0, 1] and a flat-Dirichlet
// probability vector from sorted uniform spacings; value_scale 1/k.
ProphetSpec prophet_random(int H, int k, int A, Rng& rng);

LayeredMdp compile_prophet(const ProphetSpec& spec);
LayeredMdp compile_posted_pricing(const ProphetSpec& spec);
// Dispatches on spec.problem.
LayeredMdp compile(const ProphetSpec& spec);

// Threshold (or price) of `action` at a stage; +infinity for the reject-all
// action.
double prophet_threshold(const ProphetSpec& spec, int stage, Action action);

// ---------------------------------------------------------------------------
// Stochastic knapsack
//
// Compiled layout: width budget + 2. Level b + 1 means remaining budget b;
// level 0 is the overflow sink reached when an accepted item's cost exceeds
// the remaining budget (it earns nothing). Action 0 rejects (maximal in the
// order), action 1 accepts. Start level budget + 1.

struct KnapsackOutcome {
  double reward = 0.0;
  double cost = 0.0;  // must be a non-negative integer
  double prob = 0.0;
};

struct KnapsackSpec {
  int budget = 0;
  std::vector<std::vector<KnapsackOutcome>> items;
  // Scale applied to rewards; when absent it is chosen so the largest
  // realizable total is at most 1.
  std::optional<double> value_scale;
};

inline constexpr Action kKnapsackReject = 0;
inline constexpr Action kKnapsackAccept = 1;

LayeredMdp compile_knapsack(const KnapsackSpec& spec);
// Scale compile_knapsack applies.
double knapsack_value_scale(const KnapsackSpec& spec);

// ---------------------------------------------------------------------------
// Lower-bound families

// Two levels: level 0 is the secret path, level 1 absorbs every deviation.
// Start level 0. Only the final stage pays: Bern(1/2 + eps) for theta's last
// action at level 0, Bern(1/2) otherwise.
struct HardInstanceGeneralSpec {
  int A = 0;
  std::vector<Action> theta;  // one action per stage
  double epsilon = 0.0;
};

LayeredMdp hard_instance_general(const HardInstanceGeneralSpec& spec);

// Width k + 2 (levels 0..k+1), A + 1 actions 0..A where 0 is maximal and A
// minimal; start level k + 1. The secret path drops one level at each down
// stage; terminal state (1, H-1) pays Bern(1/2 + eps), every other terminal
// state Bern(1/2). Stages are 0-based here, so down stages lie in [0, H-2].
struct HardInstanceOrderedSpec {
  std::vector<int> down_stages;  // strictly increasing, size k
  std::vector<Action> actions;   // a_p in 1..A
  double epsilon = 0.0;
};

LayeredMdp hard_instance_ordered(const HardInstanceOrderedSpec& spec, int H, int A);

// Every (path, action vector) spec of the ordered family.
std::vector<HardInstanceOrderedSpec> enumerate_hard_ordered(int H, int k, int A, double epsilon);

// Level of the secret path at each stage.
std::vector<int> hard_ordered_path(const HardInstanceOrderedSpec& spec, int H);

// Family sizes L: A^H and C(H-1, k) A^k.
double hard_general_family_size(int H, int A);
double hard_ordered_family_size(int H, int k, int A);

// eps = min(sqrt(L / T), 1) / 8.
double default_hard_epsilon(double family_size, std::int64_t T);

// ---------------------------------------------------------------------------
// Random fixtures for property tests. Kernel rows are flat-Dirichlet with some
// rows made deterministic; rewards take up to three values in [0, 1/H). The
// ordered variant keeps mass on levels <= l and sorts stay probabilities
// along a random action order. General instances start at a random level,
// ordered ones at the top level.
LayeredMdp random_generic(int H, int k, int A, Rng& rng, bool ordered);

// ---------------------------------------------------------------------------
// Instance files

struct LoadedInstance {
  LayeredMdp mdp;
  // Factor applied to rewards at compile time (1 for plain MDP files unless
  // the file records one).
  double value_scale = 1.0;
  std::string kind;  // "layered-mdp", "prophet-spec" or "knapsack-spec"
};

nlohmann::json prophet_spec_to_json(const ProphetSpec& spec);
ProphetSpec prophet_spec_from_json(const nlohmann::json& doc);
nlohmann::json knapsack_spec_to_json(const KnapsackSpec& spec);
KnapsackSpec knapsack_spec_from_json(const nlohmann::json& doc);

// Reads any of the three file formats and compiles application specs.
LoadedInstance load_instance(const std::filesystem::path& path);
LoadedInstance instance_from_json(const nlohmann::json& doc);

}  // namespace bfmdp
