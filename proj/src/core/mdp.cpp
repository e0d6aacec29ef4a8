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

#include "bfmdp/mdp.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bfmdp {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

LayeredMdp::LayeredMdp(LayeredMdpData data) : data_(std::move(data)) {
  const MdpShape& s = data_.shape;
  require(s.horizon >= 1 && s.width >= 1 && s.num_actions >= 1,
          "LayeredMdp: horizon, width and num_actions must be positive");
  require(s.num_actions <= 65535, "LayeredMdp: at most 65535 actions");
  require(data_.models.size() == s.num_state_actions(),
          "LayeredMdp: expected " + std::to_string(s.num_state_actions()) +
              " state-action models, got " + std::to_string(data_.models.size()));
  for (int stage = 0; stage < s.horizon; ++stage) {
    const std::size_t expected = stage + 1 < s.horizon ? static_cast<std::size_t>(s.width) : 0;
    for (int level = 0; level < s.width; ++level) {
      for (Action a = 0; a < s.num_actions; ++a) {
        const StateActionModel& m = data_.models[index(level, stage, a)];
        require(m.transition.size() == expected,
                "LayeredMdp: transition row at stage " + std::to_string(stage) +
                    " must have length " + std::to_string(expected));
        require(!m.reward.support.empty() && m.reward.support.size() == m.reward.probs.size(),
                "LayeredMdp: malformed reward distribution");
        if (m.coupled()) {
          require(expected > 0, "LayeredMdp: coupling given at the final stage");
          require(m.transition_given_reward.size() == m.reward.size(),
                  "LayeredMdp: coupling needs one row per reward support point");
          for (const auto& row : m.transition_given_reward)
            require(row.size() == expected, "LayeredMdp: coupling row has wrong length");
        }
      }
    }
  }
  if (data_.ordering) {
    require(data_.ordering->size() == s.num_states(),
            "LayeredMdp: ordering needs one action order per state");
    for (const ActionOrder& order : *data_.ordering)
      require(order.size() == static_cast<std::size_t>(s.num_actions),
              "LayeredMdp: each action order must list every action");
  }
  build_caches();
}

void LayeredMdp::build_caches() {
  const MdpShape& s = data_.shape;
  const std::size_t rows = s.rows_per_stage();
  const std::size_t width = static_cast<std::size_t>(s.width);

  reward_means_.resize(data_.models.size());
  for (std::size_t i = 0; i < data_.models.size(); ++i) reward_means_[i] = data_.models[i].reward.mean();

  stage_matrices_.assign(static_cast<std::size_t>(s.horizon - 1) * width * rows, 0.0);
  for (int stage = 0; stage + 1 < s.horizon; ++stage) {
    double* block = stage_matrices_.data() + static_cast<std::size_t>(stage) * width * rows;
    for (int level = 0; level < s.width; ++level) {
      for (Action a = 0; a < s.num_actions; ++a) {
        const auto& row = data_.models[index(level, stage, a)].transition;
        const std::size_t r = static_cast<std::size_t>(level) * s.num_actions + a;
        for (std::size_t next = 0; next < width; ++next) block[next * rows + r] = row[next];
      }
    }
  }

  ranks_.assign(data_.models.size(), 0);
  for (int stage = 0; stage < s.horizon; ++stage) {
    for (int level = 0; level < s.width; ++level) {
      for (Action a = 0; a < s.num_actions; ++a) ranks_[index(level, stage, a)] = a;
      if (!data_.ordering) continue;
      const ActionOrder& ord = (*data_.ordering)[static_cast<std::size_t>(stage) * width + level];
      for (std::size_t pos = 0; pos < ord.size(); ++pos) {
        if (ord[pos] >= 0 && ord[pos] < s.num_actions)
          ranks_[index(level, stage, ord[pos])] = static_cast<int>(pos);
      }
    }
  }

  // Every table is padded to the longest one so draws loop a fixed number of
  // times.
  auto positive = [](std::span<const double> probs) {
    return static_cast<std::uint32_t>(std::count_if(probs.begin(), probs.end(), [](double p) { return p > 0.0; }));
  };
  reward_stride_ = 1;
  successor_stride_ = 1;
  for (int stage = 0; stage < s.horizon; ++stage)
    for (int level = 0; level < s.width; ++level)
      for (Action a = 0; a < s.num_actions; ++a) {
        const StateActionModel& m = data_.models[index(level, stage, a)];
        reward_stride_ = std::max(reward_stride_, positive(m.reward.probs));
        if (stage + 1 == s.horizon) continue;
        successor_stride_ = std::max(successor_stride_, positive(m.transition));
        for (const auto& row : m.transition_given_reward) successor_stride_ = std::max(successor_stride_, positive(row));
      }

  samplers_.assign(data_.models.size(), Sampler{});
  for (int stage = 0; stage < s.horizon; ++stage) {
    for (int level = 0; level < s.width; ++level) {
      for (Action a = 0; a < s.num_actions; ++a) {
        const StateActionModel& m = data_.models[index(level, stage, a)];
        Sampler& sampler = samplers_[index(level, stage, a)];
        add_reward_table(m.reward, sampler.reward);
        if (stage + 1 == s.horizon) continue;
        add_successor_table(m.transition, sampler.transition);
        // One successor table per reward support point; uncoupled models
        // repeat their transition table so draws never branch on coupling.
        sampler.coupled = m.coupled();
        sampler.coupled_offset = static_cast<std::uint32_t>(coupled_.size());
        coupled_.resize(coupled_.size() + m.reward.size());
        for (std::size_t j = 0; j < m.reward.size(); ++j) {
          Categorical cat = sampler.transition;
          if (sampler.coupled) add_successor_table(m.transition_given_reward[j], cat);
          coupled_[sampler.coupled_offset + j] = cat;
        }
      }
    }
  }
}

namespace {

// Index of the first cumulative entry above u: the number of entries <= u
// among the first stride - 1. Entries past a table's own count hold 1, which
// no u in [0, 1) reaches. Counting instead of stopping early keeps the loop
// free of data-dependent branches.
std::uint32_t count_below(const double* cdf, std::uint32_t stride, double u) {
  std::uint32_t j = 0;
  for (std::uint32_t m = 0; m + 1 < stride; ++m) j += static_cast<std::uint32_t>(cdf[m] <= u);
  return j;
}

}  // namespace

// Cumulative tables keep only positive-probability entries. The final
// cumulative entry is pinned to 1 so a uniform in [0, 1) always lands inside.
void LayeredMdp::add_reward_table(const DiscreteDistribution& reward, Categorical& out) {
  out.offset = static_cast<std::uint32_t>(sample_cdf_.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < reward.size(); ++j) {
    if (!(reward.probs[j] > 0.0)) continue;
    acc += reward.probs[j];
    sample_cdf_.push_back(acc);
    sample_values_.push_back(reward.support[j]);
    sample_slot_.push_back(static_cast<std::uint32_t>(j));
  }
  out.count = static_cast<std::uint32_t>(sample_cdf_.size()) - out.offset;
  if (out.count > 0) sample_cdf_.back() = 1.0;
  for (std::uint32_t pad = out.count; pad < reward_stride_; ++pad) {
    sample_cdf_.push_back(1.0);
    sample_values_.push_back(0.0);
    sample_slot_.push_back(0);
  }
}

void LayeredMdp::add_successor_table(std::span<const double> probs, Categorical& out) {
  out.offset = static_cast<std::uint32_t>(successor_cdf_.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (!(probs[j] > 0.0)) continue;
    acc += probs[j];
    successor_cdf_.push_back(acc);
    successor_.push_back(static_cast<std::int32_t>(j));
  }
  out.count = static_cast<std::uint32_t>(successor_cdf_.size()) - out.offset;
  if (out.count > 0) successor_cdf_.back() = 1.0;
  for (std::uint32_t pad = out.count; pad < successor_stride_; ++pad) {
    successor_cdf_.push_back(1.0);
    successor_.push_back(0);
  }
}

double LayeredMdp::draw_reward(const Sampler& sampler, double u, std::uint32_t& support_slot) const {
  const Categorical& cat = sampler.reward;
  const std::uint32_t j = count_below(sample_cdf_.data() + cat.offset, reward_stride_, u);
  support_slot = sample_slot_[cat.offset + j];
  return sample_values_[cat.offset + j];
}

int LayeredMdp::draw_next(const Sampler& sampler, std::uint32_t support_slot, double u) const {
  const Categorical& cat = coupled_[sampler.coupled_offset + support_slot];
  const std::uint32_t j = count_below(successor_cdf_.data() + cat.offset, successor_stride_, u);
  return successor_[cat.offset + j];
}

const StateActionModel& LayeredMdp::model(int level, int stage, Action action) const {
  return data_.models[index(level, stage, action)];
}

double LayeredMdp::transition(int level, int stage, Action action, int next) const {
  return data_.models[index(level, stage, action)].transition[static_cast<std::size_t>(next)];
}

std::span<const double> LayeredMdp::stage_reward_means(int stage) const {
  const std::size_t rows = data_.shape.rows_per_stage();
  return std::span<const double>(reward_means_).subspan(static_cast<std::size_t>(stage) * rows, rows);
}

std::span<const double> LayeredMdp::stage_matrix(int stage) const {
  const std::size_t block = data_.shape.rows_per_stage() * static_cast<std::size_t>(data_.shape.width);
  return std::span<const double>(stage_matrices_).subspan(static_cast<std::size_t>(stage) * block, block);
}

const ActionOrder& LayeredMdp::order(int level, int stage) const {
  if (!data_.ordering) throw std::logic_error("LayeredMdp::order: instance is not ordered");
  return (*data_.ordering)[static_cast<std::size_t>(stage) * data_.shape.width + level];
}

int LayeredMdp::rank(int level, int stage, Action action) const {
  return ranks_[index(level, stage, action)];
}

// ---------------------------------------------------------------------------

Policy::Policy(int width, int horizon, Action fill)
    : width_(width), horizon_(horizon),
      actions_(static_cast<std::size_t>(width) * static_cast<std::size_t>(horizon),
               static_cast<std::uint16_t>(fill)) {
  require(width >= 1 && horizon >= 1, "Policy: width and horizon must be positive");
  require(fill >= 0 && fill <= 65535, "Policy: action out of range");
}

void Policy::set(int level, int stage, Action action) {
  require(action >= 0 && action <= 65535, "Policy: action out of range");
  actions_[static_cast<std::size_t>(stage) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(level)] = static_cast<std::uint16_t>(action);
}

bool Policy::well_formed(const MdpShape& shape) const {
  if (width_ != shape.width || horizon_ != shape.horizon) return false;
  return std::all_of(actions_.begin(), actions_.end(),
                     [&](std::uint16_t a) { return a < shape.num_actions; });
}

std::string Policy::to_string() const {
  std::string out;
  for (int level = 0; level < width_; ++level) {
    if (level > 0) out += ';';
    for (int stage = 0; stage < horizon_; ++stage) {
      if (stage > 0) out += ' ';
      out += std::to_string((*this)(level, stage));
    }
  }
  return out;
}

Policy Policy::parse(std::string_view text) {
  std::vector<std::vector<int>> rows(1);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == ';') {
      rows.emplace_back();
      ++pos;
    } else if (c == ' ' || c == ',' || c == '\t' || c == '\n') {
      ++pos;
    } else {
      int value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
      require(ec == std::errc() && ptr != text.data() + pos, "Policy::parse: bad token in '" + std::string(text) + "'");
      rows.back().push_back(value);
      pos = static_cast<std::size_t>(ptr - text.data());
    }
  }
  require(!rows.front().empty(), "Policy::parse: empty policy");
  const std::size_t horizon = rows.front().size();
  for (const auto& row : rows) require(row.size() == horizon, "Policy::parse: ragged rows");
  Policy policy(static_cast<int>(rows.size()), static_cast<int>(horizon));
  for (std::size_t level = 0; level < rows.size(); ++level)
    for (std::size_t stage = 0; stage < horizon; ++stage)
      policy.set(static_cast<int>(level), static_cast<int>(stage), rows[level][stage]);
  return policy;
}

std::size_t PolicyHash::operator()(const Policy& policy) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint16_t a : policy.raw()) {
    h ^= a;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h ^ static_cast<std::uint64_t>(policy.width()) << 48);
}

// ---------------------------------------------------------------------------

RandomizedStageProfile::RandomizedStageProfile(const MdpShape& shape)
    : shape_(shape), probs_(shape.num_state_actions(), 0.0) {}

RandomizedStageProfile RandomizedStageProfile::deterministic(const MdpShape& shape, const Policy& policy) {
  require(policy.well_formed(shape), "RandomizedStageProfile: policy does not fit the shape");
  RandomizedStageProfile profile(shape);
  for (int stage = 0; stage < shape.horizon; ++stage)
    for (int level = 0; level < shape.width; ++level) profile.set(level, stage, policy(level, stage), 1.0);
  return profile;
}

std::span<const double> RandomizedStageProfile::at(int level, int stage) const {
  return std::span<const double>(probs_).subspan(index(level, stage, 0), static_cast<std::size_t>(shape_.num_actions));
}

std::span<double> RandomizedStageProfile::at(int level, int stage) {
  return std::span<double>(probs_).subspan(index(level, stage, 0), static_cast<std::size_t>(shape_.num_actions));
}

double RandomizedStageProfile::max_normalization_error() const {
  double worst = 0.0;
  for (int stage = 0; stage < shape_.horizon; ++stage) {
    for (int level = 0; level < shape_.width; ++level) {
      const auto dist = at(level, stage);
      const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
      worst = std::max(worst, std::abs(total - 1.0));
    }
  }
  return worst;
}

}  // namespace bfmdp
