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

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "bfmdp/instances.hpp"
#include "outcomes.hpp"

namespace bfmdp {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.25)) throw std::invalid_argument("hard instance: epsilon must lie in (0, 1/4)");
}

StateActionModel move_to(int next, int width) { return detail::model_from_outcomes({{0.0, next, 1.0}}, width); }

}  // namespace

LayeredMdp hard_instance_general(const HardInstanceGeneralSpec& spec) {
  check_epsilon(spec.epsilon);
  const int H = static_cast<int>(spec.theta.size());
  if (H < 1 || spec.A < 1) throw std::invalid_argument("hard_instance_general: need A >= 1 and a non-empty theta");
  for (Action a : spec.theta)
    if (a < 0 || a >= spec.A) throw std::invalid_argument("hard_instance_general: theta entry out of range");
  LayeredMdpData data;
  data.shape = {H, 2, spec.A};
  data.start_level = 0;
  for (int stage = 0; stage < H; ++stage) {
    const bool last = stage + 1 == H;
    for (int level = 0; level < 2; ++level) {
      for (Action a = 0; a < spec.A; ++a) {
        const bool on_path = level == 0 && a == spec.theta[static_cast<std::size_t>(stage)];
        if (last) {
          StateActionModel m;
          m.reward = DiscreteDistribution::bernoulli(on_path ? 0.5 + spec.epsilon : 0.5);
          data.models.push_back(std::move(m));
        } else {
          data.models.push_back(move_to(on_path ? 0 : 1, 2));
        }
      }
    }
  }
  return LayeredMdp(std::move(data));
}

std::vector<int> hard_ordered_path(const HardInstanceOrderedSpec& spec, int H) {
  const int k = static_cast<int>(spec.down_stages.size());
  std::vector<int> path(static_cast<std::size_t>(H));
  int drops = 0;
  for (int stage = 0; stage < H; ++stage) {
    path[static_cast<std::size_t>(stage)] = k + 1 - drops;
    if (drops < k && spec.down_stages[static_cast<std::size_t>(drops)] == stage) ++drops;
  }
  return path;
}

LayeredMdp hard_instance_ordered(const HardInstanceOrderedSpec& spec, int H, int A) {
  check_epsilon(spec.epsilon);
  const int k = static_cast<int>(spec.down_stages.size());
  if (H < 2 || A < 1) throw std::invalid_argument("hard_instance_ordered: need H >= 2 and A >= 1");
  if (spec.actions.size() != spec.down_stages.size())
    throw std::invalid_argument("hard_instance_ordered: one action per down stage");
  for (std::size_t p = 0; p < spec.down_stages.size(); ++p) {
    const int d = spec.down_stages[p];
    if (d < 0 || d > H - 2 || (p > 0 && d <= spec.down_stages[p - 1]))
      throw std::invalid_argument("hard_instance_ordered: down stages must be strictly increasing within [0, H-2]");
    if (spec.actions[p] < 1 || spec.actions[p] > A)
      throw std::invalid_argument("hard_instance_ordered: down actions must lie in 1..A");
  }
  const int width = k + 2;
  const int actions = A + 1;
  const std::vector<int> path = hard_ordered_path(spec, H);
  LayeredMdpData data;
  data.shape = {H, width, actions};
  data.start_level = k + 1;
  ActionOrder descending;
  for (Action a = A; a >= 0; --a) descending.push_back(a);
  std::vector<ActionOrder> ordering;
  int drops = 0;
  for (int stage = 0; stage < H; ++stage) {
    const bool last = stage + 1 == H;
    const int on_path = path[static_cast<std::size_t>(stage)];
    const bool down = drops < k && spec.down_stages[static_cast<std::size_t>(drops)] == stage;
    for (int level = 0; level < width; ++level) {
      ordering.push_back(descending);
      for (Action a = 0; a < actions; ++a) {
        if (last) {
          StateActionModel m;
          m.reward = DiscreteDistribution::bernoulli(level == 1 ? 0.5 + spec.epsilon : 0.5);
          data.models.push_back(std::move(m));
          continue;
        }
        int next = 0;
        if (level > on_path) {
          next = level;
        } else if (level < on_path) {
          next = 0;
        } else if (down) {
          const Action target = spec.actions[static_cast<std::size_t>(drops)];
          next = a < target ? level : (a == target ? level - 1 : 0);
        } else {
          next = a == 0 ? level : 0;
        }
        data.models.push_back(move_to(next, width));
      }
    }
    if (down) ++drops;
  }
  data.ordering = std::move(ordering);
  return LayeredMdp(std::move(data));
}

std::vector<HardInstanceOrderedSpec> enumerate_hard_ordered(int H, int k, int A, double epsilon) {
  std::vector<HardInstanceOrderedSpec> out;
  if (k < 0 || k > H - 1) return out;
  std::vector<int> stages(static_cast<std::size_t>(k));
  std::vector<Action> actions(static_cast<std::size_t>(k), 1);
  // Paths: k-subsets of [0, H-2] in lexicographic order.
  std::function<void(int, int)> choose = [&](int position, int from) {
    if (position == k) {
      std::fill(actions.begin(), actions.end(), 1);
      while (true) {
        out.push_back({stages, actions, epsilon});
        int p = k - 1;
        while (p >= 0 && actions[static_cast<std::size_t>(p)] == A) actions[static_cast<std::size_t>(p--)] = 1;
        if (p < 0) break;
        ++actions[static_cast<std::size_t>(p)];
      }
      return;
    }
    for (int s = from; s <= H - 2; ++s) {
      stages[static_cast<std::size_t>(position)] = s;
      choose(position + 1, s + 1);
    }
  };
  choose(0, 0);
  return out;
}

double hard_general_family_size(int H, int A) { return std::pow(static_cast<double>(A), H); }

double hard_ordered_family_size(int H, int k, int A) {
  double paths = 1.0;
  for (int j = 1; j <= k; ++j) paths = paths * (H - 1 - k + j) / j;
  return std::round(paths) * std::pow(static_cast<double>(A), k);
}

double default_hard_epsilon(double family_size, std::int64_t T) {
  if (T < 1 || !(family_size > 0.0)) throw std::invalid_argument("default_hard_epsilon: need T >= 1 and L > 0");
  return std::min(std::sqrt(family_size / static_cast<double>(T)), 1.0) / 8.0;
}

}  // namespace bfmdp
