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

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bfmdp/learners.hpp"

namespace bfmdp {

std::int64_t episodes_per_block(std::int64_t T, double epsilon) {
  if (T < 2) throw std::invalid_argument("episodes_per_block: T must be at least 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("episodes_per_block: epsilon must be positive");
  return static_cast<std::int64_t>(std::ceil(12.0 * std::log(static_cast<double>(T)) / (epsilon * epsilon)));
}

BudgetExceeded::BudgetExceeded(std::int64_t needed_, std::int64_t remaining_)
    : std::runtime_error("phase needs " + std::to_string(needed_) + " episodes but only " +
                         std::to_string(remaining_) + " remain"),
      needed(needed_),
      remaining(remaining_) {}

double PhaseReport::mean(int level, int stage, Action action) const {
  const MdpShape& s = refined.shape();
  return means[(static_cast<std::size_t>(stage) * s.width + level) * s.num_actions + action];
}

PhaseReport exp_ref(Environment& env, const ActionSetTable& active, double epsilon, std::int64_t T,
                    const ThresholdTable& thresholds, Variant variant, Rng& rng, const ExpRefOptions& options) {
  const MdpShape& shape = env.shape();
  if (env.mode() != FeedbackMode::Bandit) throw std::invalid_argument("exp_ref: needs a bandit-feedback environment");
  if (!(active.shape() == shape)) throw std::invalid_argument("exp_ref: action sets do not match the environment");
  if (!active.all_nonempty()) throw std::invalid_argument("exp_ref: empty action set");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("exp_ref: epsilon must lie in (0, 1]");
  if (thresholds.width() != shape.width || thresholds.horizon() != shape.horizon)
    throw std::invalid_argument("exp_ref: threshold table does not match the environment");

  const std::int64_t block = episodes_per_block(T, epsilon);
  const std::int64_t needed = block * static_cast<std::int64_t>(active.total_size());
  if (!options.truncate && needed > env.remaining()) throw BudgetExceeded(needed, env.remaining());

  Exploration explore = sample_exploration(variant, active, env, rng);

  PhaseReport report;
  report.epsilon = epsilon;
  report.refined = active;
  report.explore = explore.actions;
  report.empirical_best = options.fallback_best.value_or(Policy(shape.width, shape.horizon));
  report.means.assign(shape.num_state_actions(), std::numeric_limits<double>::quiet_NaN());

  // Stages after the current one play alpha-hat; `assigned` tracks which
  // entries of `play` already hold this phase's alpha-hat.
  Policy play = explore.actions;
  std::vector<bool> assigned(shape.num_states(), false);
  auto state_index = [&](int level, int stage) { return static_cast<std::size_t>(stage) * shape.width + level; };

  for (int stage = shape.horizon - 1; stage >= 0; --stage) {
    for (int next = stage + 1; next < shape.horizon; ++next)
      for (int level = 0; level < shape.width; ++level)
        if (!assigned[state_index(level, next)]) throw std::logic_error("exp_ref: tail action not yet learned");

    for (int level = shape.width - 1; level >= 0; --level) {
      const auto& set = active.at(level, stage);
      bool finished = true;
      for (Action a : set) {
        play.set(level, stage, a);
        if (env.remaining() < block) {
          const std::int64_t left = env.remaining();
          if (left > 0) env.play_block(play, left);
          report.episodes += left;
          report.complete = false;
          finished = false;
          break;
        }
        const double total = env.play_block(play, block);
        report.episodes += block;
        report.means[(state_index(level, stage)) * shape.num_actions + a] = total / static_cast<double>(block);
      }
      play.set(level, stage, explore.actions(level, stage));
      if (!finished) return report;

      Action best = set.front();
      for (Action a : set)
        if (report.mean(level, stage, a) > report.mean(level, stage, best)) best = a;
      report.empirical_best.set(level, stage, best);

      const long double cut = static_cast<long double>(report.mean(level, stage, best)) -
                              thresholds(level, stage) * static_cast<long double>(epsilon);
      std::vector<Action> kept;
      for (Action a : set)
        if (static_cast<long double>(report.mean(level, stage, a)) >= cut) kept.push_back(a);
      report.refined.set(level, stage, std::move(kept));
    }
    for (int level = 0; level < shape.width; ++level) {
      play.set(level, stage, report.empirical_best(level, stage));
      assigned[state_index(level, stage)] = true;
    }
  }
  return report;
}

}  // namespace bfmdp
