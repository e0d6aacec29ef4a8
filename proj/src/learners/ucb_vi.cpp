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
#include <stdexcept>

#include "bfmdp/kernels.hpp"
#include "bfmdp/learners.hpp"

namespace bfmdp {

// Per stage: visit counts, reward sums, optimistic bias r-hat + bonus, and
// successor counts and estimates in the kernels' successor-major layout.
UcbViModel::UcbViModel(const MdpShape& shape, double log_term)
    : shape_(shape),
      log_term_(log_term),
      rows_(shape.rows_per_stage()),
      block_(shape.rows_per_stage() * static_cast<std::size_t>(shape.width)),
      visits_(rows_ * shape.horizon, 0.0),
      reward_sum_(rows_ * shape.horizon, 0.0),
      bias_(rows_ * shape.horizon, std::sqrt(2.0 * log_term)),
      next_count_(block_ * std::max(shape.horizon - 1, 0), 0.0),
      next_estimate_(block_ * std::max(shape.horizon - 1, 0), 0.0),
      q_(rows_ * shape.horizon, 0.0),
      policy_(shape.width, shape.horizon),
      values_(shape.width, shape.horizon) {
  if (!(log_term > 0.0)) throw std::invalid_argument("UcbViModel: log term must be positive");
}

double UcbViModel::bonus(double visits) const { return std::sqrt(2.0 * log_term_ / std::max(1.0, visits)); }

double UcbViModel::visits(int level, int stage, Action action) const {
  return visits_[rows_ * stage + static_cast<std::size_t>(level) * shape_.num_actions + action];
}

double UcbViModel::transition_estimate(int level, int stage, Action action, int next) const {
  return next_estimate_[block_ * stage + static_cast<std::size_t>(next) * rows_ +
                        static_cast<std::size_t>(level) * shape_.num_actions + action];
}

double UcbViModel::q_value(int level, int stage, Action action) const {
  return q_[rows_ * stage + static_cast<std::size_t>(level) * shape_.num_actions + action];
}

const Policy& UcbViModel::plan() {
  const int H = shape_.horizon;
  const int k = shape_.width;
  const int A = shape_.num_actions;
  const kernels::StageShape stage_shape{rows_, static_cast<std::size_t>(k)};
  const kernels::KernelTable& kernel = kernels::active();
  for (int stage = H - 1; stage >= 0; --stage) {
    std::span<const double> stage_bias(bias_.data() + rows_ * stage, rows_);
    std::span<double> q(q_.data() + rows_ * stage, rows_);
    if (stage + 1 == H) {
      std::copy(stage_bias.begin(), stage_bias.end(), q.begin());
    } else {
      kernel.backup(stage_shape, std::span<const double>(next_estimate_.data() + block_ * stage, block_), stage_bias,
                    values_.stage(stage + 1), q);
    }
    for (int level = 0; level < k; ++level) {
      const double* row = q.data() + static_cast<std::size_t>(level) * A;
      int best = 0;
      for (int a = 1; a < A; ++a)
        if (row[a] > row[best]) best = a;
      policy_.set(level, stage, best);
      values_(level, stage) = std::min(1.0, row[best]);
    }
  }
  return policy_;
}

void UcbViModel::update(const Policy& policy, const EpisodeOutcome& outcome) {
  if (!outcome.trajectory || !outcome.step_rewards) throw std::invalid_argument("UcbViModel: needs semi-bandit outcomes");
  const auto& path = *outcome.trajectory;
  const auto& rewards = *outcome.step_rewards;
  const int H = shape_.horizon;
  for (int stage = 0; stage < H; ++stage) {
    const int level = path[static_cast<std::size_t>(stage)].level;
    const std::size_t r = static_cast<std::size_t>(level) * shape_.num_actions + policy(level, stage);
    const std::size_t idx = rows_ * stage + r;
    const double n = visits_[idx] += 1.0;
    reward_sum_[idx] += rewards[static_cast<std::size_t>(stage)];
    bias_[idx] = reward_sum_[idx] / n + std::sqrt(2.0 * log_term_ / n);
    if (stage + 1 < H) {
      const int next = path[static_cast<std::size_t>(stage) + 1].level;
      double* counts = next_count_.data() + block_ * stage;
      double* estimate = next_estimate_.data() + block_ * stage;
      counts[static_cast<std::size_t>(next) * rows_ + r] += 1.0;
      for (int s = 0; s < shape_.width; ++s)
        estimate[static_cast<std::size_t>(s) * rows_ + r] = counts[static_cast<std::size_t>(s) * rows_ + r] / n;
    }
  }
}

LearnerRun ucb_vi(Environment& env, const UcbViOptions& options) {
  if (env.mode() != FeedbackMode::SemiBandit) throw std::invalid_argument("ucb_vi: needs semi-bandit feedback");
  if (!(options.delta > 0.0 && options.delta < 1.0)) throw std::invalid_argument("ucb_vi: delta must lie in (0, 1)");
  const MdpShape& shape = env.shape();
  const double log_term =
      std::log(static_cast<double>(shape.horizon) * shape.width * shape.num_actions *
               static_cast<double>(std::max<std::int64_t>(env.budget(), 1)) / options.delta);
  UcbViModel model(shape, log_term);
  while (env.remaining() > 0) {
    const Policy& policy = model.plan();
    model.update(policy, env.play(policy));
  }
  return env.take_run();
}

}  // namespace bfmdp
