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
#include <sstream>

#include "bfmdp/mdp.hpp"

namespace bfmdp {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kRewardBoundTolerance = 1e-12;

std::string describe_row_sum(double total) {
  std::ostringstream out;
  out.precision(17);
  out << "row sums to " << total;
  return out.str();
}

void check_row(std::span<const double> row, int stage, int level, Action a, Violation::Kind sum_kind,
               std::vector<Violation>& out) {
  double total = 0.0;
  for (std::size_t s = 0; s < row.size(); ++s) {
    if (!(row[s] >= 0.0 && row[s] <= 1.0)) {
      out.push_back({Violation::Kind::KernelEntry, stage, level, a,
                     "entry for next level " + std::to_string(s) + " outside [0, 1]"});
    }
    total += row[s];
  }
  if (std::abs(total - 1.0) > kSumTolerance) out.push_back({sum_kind, stage, level, a, describe_row_sum(total)});
}

}  // namespace

double max_realizable_reward(const LayeredMdp& mdp) {
  const MdpShape& shape = mdp.shape();
  std::vector<double> next(static_cast<std::size_t>(shape.width), 0.0);
  std::vector<double> current(next.size(), 0.0);
  for (int stage = shape.horizon - 1; stage >= 0; --stage) {
    const bool last = stage + 1 == shape.horizon;
    for (int level = 0; level < shape.width; ++level) {
      double best = 0.0;
      for (Action a = 0; a < shape.num_actions; ++a) {
        const StateActionModel& m = mdp.model(level, stage, a);
        for (std::size_t j = 0; j < m.reward.size(); ++j) {
          if (!(m.reward.probs[j] > 0.0)) continue;
          const double value = m.reward.support[j];
          if (last) {
            best = std::max(best, value);
            continue;
          }
          const std::vector<double>& row = m.coupled() ? m.transition_given_reward[j] : m.transition;
          for (std::size_t s = 0; s < row.size(); ++s)
            if (row[s] > 0.0) best = std::max(best, value + next[s]);
        }
      }
      current[static_cast<std::size_t>(level)] = best;
    }
    std::swap(current, next);
  }
  return next[static_cast<std::size_t>(mdp.start_level())];
}

ValidationReport validate(const LayeredMdp& mdp) {
  ValidationReport report;
  auto& out = report.violations;
  const MdpShape& shape = mdp.shape();

  if (mdp.start_level() < 0 || mdp.start_level() >= shape.width) {
    out.push_back({Violation::Kind::StartLevel, 0, mdp.start_level(), -1, "start level outside [0, width)"});
    return report;
  }

  for (int stage = 0; stage < shape.horizon; ++stage) {
    const bool last = stage + 1 == shape.horizon;
    for (int level = 0; level < shape.width; ++level) {
      for (Action a = 0; a < shape.num_actions; ++a) {
        const StateActionModel& m = mdp.model(level, stage, a);
        if (auto problem = m.reward.problem(kSumTolerance))
          out.push_back({Violation::Kind::RewardDistribution, stage, level, a, *problem});
        if (last) continue;
        check_row(m.transition, stage, level, a, Violation::Kind::KernelRowSum, out);
        if (!m.coupled()) continue;
        std::vector<double> marginal(m.transition.size(), 0.0);
        for (std::size_t j = 0; j < m.reward.size(); ++j) {
          const auto& row = m.transition_given_reward[j];
          if (m.reward.probs[j] > 0.0) check_row(row, stage, level, a, Violation::Kind::Coupling, out);
          for (std::size_t s = 0; s < row.size(); ++s) marginal[s] += m.reward.probs[j] * row[s];
        }
        for (std::size_t s = 0; s < marginal.size(); ++s) {
          if (std::abs(marginal[s] - m.transition[s]) > kSumTolerance) {
            out.push_back({Violation::Kind::Coupling, stage, level, a,
                           "coupled rows do not reproduce the transition marginal at next level " +
                               std::to_string(s)});
            break;
          }
        }
      }
    }
  }
  if (!report.ok()) return report;

  const double bound = max_realizable_reward(mdp);
  if (bound > 1.0 + kRewardBoundTolerance) {
    std::ostringstream detail;
    detail.precision(17);
    detail << "some path realizes total reward " << bound << " > 1";
    out.push_back({Violation::Kind::TotalRewardBound, -1, -1, -1, detail.str()});
  }

  if (!mdp.ordered()) return report;
  for (int stage = 0; stage < shape.horizon; ++stage) {
    for (int level = 0; level < shape.width; ++level) {
      ActionOrder sorted = mdp.order(level, stage);
      std::sort(sorted.begin(), sorted.end());
      bool permutation = true;
      for (int a = 0; a < shape.num_actions; ++a) permutation = permutation && sorted[static_cast<std::size_t>(a)] == a;
      if (!permutation) {
        out.push_back({Violation::Kind::OrderingPermutation, stage, level, -1, "order is not a permutation of the actions"});
        continue;
      }
      if (stage + 1 == shape.horizon) continue;
      for (Action a = 0; a < shape.num_actions; ++a) {
        for (int next = level + 1; next < shape.width; ++next) {
          if (mdp.transition(level, stage, a, next) != 0.0) {
            out.push_back({Violation::Kind::OrderedDownward, stage, level, a,
                           "positive probability of moving up to level " + std::to_string(next)});
            break;
          }
        }
      }
      const ActionOrder& order = mdp.order(level, stage);
      for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
        const double lower = mdp.transition(level, stage, order[pos], level);
        const double upper = mdp.transition(level, stage, order[pos + 1], level);
        if (lower > upper + kSumTolerance) {
          out.push_back({Violation::Kind::OrderedStayMonotone, stage, level, order[pos],
                         "stay probability exceeds that of the next action in the order (" +
                             std::to_string(order[pos + 1]) + ")"});
        }
      }
    }
  }
  return report;
}

bool ValidationReport::has(Violation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (const Violation& v : violations) {
    out << to_string(v.kind);
    if (v.stage >= 0) out << " stage=" << v.stage;
    if (v.level >= 0) out << " level=" << v.level;
    if (v.action >= 0) out << " action=" << v.action;
    out << ": " << v.detail << '\n';
  }
  return out.str();
}

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::Shape: return "shape";
    case Violation::Kind::StartLevel: return "start-level";
    case Violation::Kind::RewardDistribution: return "reward-distribution";
    case Violation::Kind::KernelEntry: return "kernel-entry";
    case Violation::Kind::KernelRowSum: return "kernel-row-sum";
    case Violation::Kind::Coupling: return "coupling";
    case Violation::Kind::TotalRewardBound: return "total-reward-bound";
    case Violation::Kind::OrderingPermutation: return "ordering-permutation";
    case Violation::Kind::OrderedDownward: return "ordered-downward";
    case Violation::Kind::OrderedStayMonotone: return "ordered-stay-monotone";
  }
  return "unknown";
}

}  // namespace bfmdp
