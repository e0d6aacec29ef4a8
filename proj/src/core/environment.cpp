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
#include <iterator>
#include <stdexcept>

#include "bfmdp/simulate.hpp"

namespace bfmdp {

void LearnerRun::record(const Policy& policy, std::int64_t episodes) {
  if (episodes <= 0) return;
  if (!segments_.empty()) {
    Segment& last = segments_.back();
    if (policies_[last.policy_id] == policy) {
      last.length += episodes;
      total_ += episodes;
      return;
    }
  }
  auto [it, inserted] = ids_.try_emplace(policy, static_cast<std::uint32_t>(policies_.size()));
  if (inserted) policies_.push_back(policy);
  segments_.push_back({total_ + 1, episodes, it->second});
  total_ += episodes;
}

const Policy& LearnerRun::policy_at(std::int64_t episode) const {
  if (episode < 1 || episode > total_) throw std::out_of_range("LearnerRun::policy_at: episode out of range");
  auto it = std::upper_bound(segments_.begin(), segments_.end(), episode,
                             [](std::int64_t t, const Segment& s) { return t < s.first_episode; });
  return policies_[std::prev(it)->policy_id];
}

Environment::Environment(const LayeredMdp& mdp, FeedbackMode mode, std::uint64_t seed, std::int64_t budget)
    : mdp_(mdp), mode_(mode), rng_(seed), budget_(budget) {
  if (budget < 0) throw std::invalid_argument("Environment: negative budget");
}

double Environment::elapsed_seconds() const {
  if (!clock_started_) return 0.0;
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start_).count();
}

void Environment::consume(const Policy& policy, std::int64_t episodes) {
  if (episodes > remaining())
    throw BudgetExhausted("Environment: " + std::to_string(episodes) + " episodes requested, " +
                          std::to_string(remaining()) + " remain");
  if (!policy.well_formed(mdp_.shape())) throw std::invalid_argument("Environment: policy does not fit the MDP");
  if (!clock_started_) reset_clock();
  run_.record(policy, episodes);
}

EpisodeOutcome Environment::play(const Policy& policy) {
  consume(policy, 1);
  EpisodeOutcome outcome = simulate_episode(mdp_, policy, mode_, rng_);
  ++played_;
  if (stride_ > 0 && played_ % stride_ == 0) run_.add_checkpoint(played_, elapsed_seconds());
  if (played_ == budget_) run_.add_checkpoint(played_, elapsed_seconds());
  return outcome;
}

double Environment::play_block(const Policy& policy, std::int64_t episodes) {
  consume(policy, episodes);
  double total = 0.0;
  for (std::int64_t e = 0; e < episodes; ++e) {
    total += simulate_aggregate(mdp_, policy, rng_);
    ++played_;
    if (stride_ > 0 && played_ % stride_ == 0) run_.add_checkpoint(played_, elapsed_seconds());
  }
  if (played_ == budget_ && (run_.checkpoints().empty() || run_.checkpoints().back().episode != played_))
    run_.add_checkpoint(played_, elapsed_seconds());
  return total;
}

}  // namespace bfmdp
