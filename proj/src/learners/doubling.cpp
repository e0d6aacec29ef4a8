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
#include <stdexcept>

#include "bfmdp/learners.hpp"

namespace bfmdp {

DoublingSchedule doubling_schedule(int H, int k, int A, std::int64_t T) {
  if (H < 1 || k < 1 || A < 1) throw std::invalid_argument("doubling_schedule: H, k and A must be positive");
  if (T < 2) throw std::invalid_argument("doubling_schedule: T must be at least 2");
  DoublingSchedule schedule;
  const double hka = static_cast<double>(H) * k * A;
  schedule.epsilon_floor = std::sqrt(hka * std::log(static_cast<double>(T)) / static_cast<double>(T));
  for (double eps = 1.0; eps > schedule.epsilon_floor; eps /= 2.0) {
    const std::int64_t block = episodes_per_block(T, eps);
    schedule.epsilons.push_back(eps);
    schedule.block_length.push_back(block);
    schedule.scheduled_episodes += block * static_cast<std::int64_t>(H) * k * A;
  }
  return schedule;
}

LearnerRun doubling(Environment& env, Variant variant, std::uint64_t seed, DoublingReport* report) {
  const MdpShape& shape = env.shape();
  const std::int64_t T = env.budget();
  const DoublingSchedule schedule = doubling_schedule(shape.horizon, shape.width, shape.num_actions, T);
  const ThresholdTable thresholds = thresholds_for(variant, shape);
  Rng rng(seed);

  ActionSetTable active(shape);
  Policy best(shape.width, shape.horizon);
  for (double eps : schedule.epsilons) {
    if (env.remaining() == 0) break;
    ExpRefOptions options;
    options.truncate = true;
    options.fallback_best = best;
    PhaseReport phase = exp_ref(env, active, eps, T, thresholds, variant, rng, options);
    best = phase.empirical_best;
    const bool complete = phase.complete;
    if (complete) active = phase.refined;
    if (report) report->phases.push_back(std::move(phase));
    if (!complete) break;
  }
  const std::int64_t left = env.remaining();
  if (left > 0) env.play_block(best, left);
  if (report) {
    report->final_policy = best;
    report->exploit_episodes = left;
  }
  return env.take_run();
}

LearnerRun fixed_policy(Environment& env, const Policy& policy) {
  if (env.remaining() > 0) env.play_block(policy, env.remaining());
  return env.take_run();
}

}  // namespace bfmdp
