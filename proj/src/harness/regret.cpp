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
#include <chrono>
#include <limits>
#include <map>
#include <stdexcept>

#include "bfmdp/dynamic_programming.hpp"
#include "bfmdp/harness.hpp"

namespace bfmdp {

double RegretTrace::cum_at(std::int64_t episode) const {
  auto it = std::lower_bound(rows.begin(), rows.end(), episode,
                             [](const TraceRow& row, std::int64_t t) { return row.episode < t; });
  if (it == rows.end() || it->episode != episode)
    throw std::out_of_range("RegretTrace::cum_at: episode " + std::to_string(episode) + " not recorded");
  return it->cum_regret;
}

RegretTrace regret_trace(const LayeredMdp& mdp, const LearnerRun& run, std::int64_t stride, double factor) {
  if (stride < 1) throw std::invalid_argument("regret_trace: stride must be at least 1");
  RegretTrace trace;
  trace.episodes = run.total_episodes();
  trace.distinct_policies = run.policies().size();
  trace.optimal_value = optimal_policy(mdp).value;

  std::vector<double> gaps;
  gaps.reserve(run.policies().size());
  for (const Policy& policy : run.policies()) gaps.push_back(trace.optimal_value - policy_value(mdp, policy));

  const auto& segments = run.segments();
  const auto& checkpoints = run.checkpoints();
  std::size_t seg = 0;
  std::size_t check = 0;
  double before_segment = 0.0;
  double wall = 0.0;
  const std::int64_t T = run.total_episodes();
  for (std::int64_t t = std::min(stride, T); t <= T && t > 0;) {
    while (segments[seg].first_episode + segments[seg].length - 1 < t) {
      before_segment += static_cast<double>(segments[seg].length) * gaps[segments[seg].policy_id];
      ++seg;
    }
    while (check < checkpoints.size() && checkpoints[check].episode <= t) wall = checkpoints[check++].elapsed_seconds;
    const double gap = gaps[segments[seg].policy_id];
    const double cum = before_segment + static_cast<double>(t - segments[seg].first_episode + 1) * gap;
    trace.rows.push_back({t, gap * factor, cum * factor, wall});
    if (t == T) break;
    t = std::min(t + stride, T);
  }
  return trace;
}

RegretTrace run_cell(const CellSpec& cell) {
  if (!cell.instance.mdp) throw std::invalid_argument("run_cell: no instance");
  const LayeredMdp& mdp = *cell.instance.mdp;
  if (cell.T < 2) throw std::invalid_argument("run_cell: T must be at least 2");
  if (cell.algorithm == Algorithm::OrderedExpRef) {
    if (!mdp.ordered()) throw std::invalid_argument("run_cell: the ordered variant needs an ordered instance");
    if (mdp.width() > mdp.horizon()) throw std::invalid_argument("run_cell: the ordered variant needs k <= H");
  }
  Environment env(mdp, feedback_for(cell.algorithm), Rng::derive(cell.seed, 0), cell.T);
  env.set_checkpoint_stride(cell.stride);
  const std::uint64_t learner_seed = Rng::derive(cell.seed, 1);

  const auto start = std::chrono::steady_clock::now();
  env.reset_clock();
  LearnerRun run;
  switch (cell.algorithm) {
    case Algorithm::ExpRef: run = doubling(env, Variant::General, learner_seed); break;
    case Algorithm::OrderedExpRef: run = doubling(env, Variant::Ordered, learner_seed); break;
    case Algorithm::UcbVi: run = ucb_vi(env, {cell.delta}); break;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (run.total_episodes() != cell.T) throw std::logic_error("run_cell: learner did not play exactly T episodes");

  RegretTrace trace = regret_trace(mdp, run, cell.stride, report_factor(cell.instance, cell.normalize_by_k));
  trace.instance = cell.instance.label;
  trace.algorithm = std::string(to_string(cell.algorithm));
  trace.seed = cell.seed;
  trace.learner_seconds = seconds;
  return trace;
}

std::vector<PanelSummary> summarize(const std::vector<RegretTrace>& traces) {
  std::vector<PanelSummary> out;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const RegretTrace& trace : traces) {
    auto [it, inserted] = index.try_emplace({trace.instance, trace.algorithm}, out.size());
    if (inserted) {
      PanelSummary s;
      s.instance = trace.instance;
      s.algorithm = trace.algorithm;
      for (const TraceRow& row : trace.rows) s.episodes.push_back(row.episode);
      s.mean.assign(s.episodes.size(), 0.0);
      s.min.assign(s.episodes.size(), std::numeric_limits<double>::infinity());
      s.max.assign(s.episodes.size(), -std::numeric_limits<double>::infinity());
      s.min_learner_seconds = std::numeric_limits<double>::infinity();
      out.push_back(std::move(s));
    }
    PanelSummary& s = out[it->second];
    if (trace.rows.size() != s.episodes.size())
      throw std::invalid_argument("summarize: traces of " + s.instance + "/" + s.algorithm + " record different episodes");
    for (std::size_t j = 0; j < trace.rows.size(); ++j) {
      if (trace.rows[j].episode != s.episodes[j])
        throw std::invalid_argument("summarize: traces of " + s.instance + "/" + s.algorithm + " record different episodes");
      s.mean[j] += trace.rows[j].cum_regret;
      s.min[j] = std::min(s.min[j], trace.rows[j].cum_regret);
      s.max[j] = std::max(s.max[j], trace.rows[j].cum_regret);
    }
    s.mean_learner_seconds += trace.learner_seconds;
    s.min_learner_seconds = std::min(s.min_learner_seconds, trace.learner_seconds);
    ++s.seeds;
  }
  for (PanelSummary& s : out) {
    for (double& m : s.mean) m /= static_cast<double>(s.seeds);
    s.mean_learner_seconds /= static_cast<double>(s.seeds);
  }
  return out;
}

}  // namespace bfmdp
