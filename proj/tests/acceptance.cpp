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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Criteria can be selected by number on the
// command line: `bfmdp_acceptance 1 4 6`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bfmdp/dynamic_programming.hpp"
#include "bfmdp/harness.hpp"
#include "bfmdp/instances.hpp"
#include "bfmdp/learners.hpp"
#include "support.hpp"

using namespace bfmdp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <class... Args>
  void add(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!text_.empty()) text_ += "; ";
    text_ += buf;
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

// ---------------------------------------------------------------------------
// Oracles shared by several criteria

// Expected total reward of a deterministic policy by pushing the level
// distribution forward and summing mean rewards.
double forward_value(const LayeredMdp& mdp, const Policy& policy) {
  const int k = mdp.width();
  std::vector<double> dist(static_cast<std::size_t>(k), 0.0), next(static_cast<std::size_t>(k));
  dist[static_cast<std::size_t>(mdp.start_level())] = 1.0;
  double total = 0.0;
  for (int i = 0; i < mdp.horizon(); ++i) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int l = 0; l < k; ++l) {
      const double q = dist[static_cast<std::size_t>(l)];
      if (q == 0.0) continue;
      const Action a = policy(l, i);
      total += q * mdp.model(l, i, a).reward.mean();
      if (i + 1 < mdp.horizon())
        for (int s = 0; s < k; ++s) next[static_cast<std::size_t>(s)] += q * mdp.transition(l, i, a, s);
    }
    dist.swap(next);
  }
  return total;
}

std::vector<ActionOrder> orders_of(const LayeredMdp& mdp) {
  std::vector<ActionOrder> out;
  for (int i = 0; i < mdp.horizon(); ++i)
    for (int l = 0; l < mdp.width(); ++l) out.push_back(mdp.order(l, i));
  return out;
}

// Random non-empty subset of the actions at every state.
ActionSetTable random_active(const MdpShape& shape, Rng& rng) {
  ActionSetTable active(shape);
  for (int i = 0; i < shape.horizon; ++i)
    for (int l = 0; l < shape.width; ++l) {
      std::vector<Action> keep;
      for (Action a = 0; a < shape.num_actions; ++a)
        if (rng.uniform() < 0.6) keep.push_back(a);
      if (keep.empty()) keep.push_back(static_cast<Action>(rng.below(static_cast<std::size_t>(shape.num_actions))));
      active.set(l, i, keep);
    }
  return active;
}

// ---------------------------------------------------------------------------
// 1. Threshold formulas

Outcome thresholds_criterion() {
  Outcome out;
  Detail d;
  Rng rng(101);
  int general_points = 0, ordered_points = 0, general_bad = 0, ordered_bad = 0;
  long double worst_ulps = 0.0L;
  while (general_points < 20) {
    const int H = 1 + static_cast<int>(rng.below(12));
    const int k = 1 + static_cast<int>(rng.below(6));
    const int A = 1 + static_cast<int>(rng.below(6));
    const int l = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(k)));
    const int i = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(H)));
    // (H - i + 1) (A k)^{H - i}, all integers.
    long double hand = H - i + 1;
    for (int r = 0; r < H - i; ++r) hand *= static_cast<long double>(A) * k;
    if (thresholds_general(H, k, A)(l - 1, i - 1) != hand) ++general_bad;
    ++general_points;
  }
  while (ordered_points < 20) {
    const int H = 1 + static_cast<int>(rng.below(12));
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(std::min(H, 6))));
    const int A = 1 + static_cast<int>(rng.below(6));
    if (H == 1) continue;
    const int l = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(k)));
    const int i = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(H - 1)));
    const long double hand = std::exp(static_cast<long double>((H - i) * k) / H) *
                             std::pow(2.0L * A * H / k, static_cast<long double>(l - 1)) *
                             std::pow(static_cast<long double>(H - i + 1), static_cast<long double>(l));
    const long double got = thresholds_ordered(H, k, A)(l - 1, i - 1);
    const long double ulps = std::fabs(got - hand) / (hand * std::numeric_limits<long double>::epsilon());
    worst_ulps = std::max(worst_ulps, ulps);
    if (ulps > 8.0L) ++ordered_bad;
    ++ordered_points;
  }
  d.add("general %d/20 exact, ordered %d/20 within 8 ulp (worst %.1Lf)", 20 - general_bad, 20 - ordered_bad,
        worst_ulps);

  int last_bad = 0, c11_bad = 0, ck1_bad = 0;
  for (int H = 1; H <= 12; ++H)
    for (int k = 1; k <= 6; ++k)
      for (int A = 1; A <= 6; ++A) {
        const ThresholdTable g = thresholds_general(H, k, A);
        long double c11 = H;
        for (int r = 0; r < H - 1; ++r) c11 *= static_cast<long double>(A) * k;
        if (g(0, 0) != c11) ++c11_bad;
        for (int l = 0; l < k; ++l)
          if (g(l, H - 1) != 1.0L) ++last_bad;
        if (k > H) continue;
        const ThresholdTable o = thresholds_ordered(H, k, A);
        for (int l = 0; l < k; ++l)
          if (o(l, H - 1) != 1.0L) ++last_bad;
        const long double bound = std::pow(2.0L * std::exp(1.0L) * A * H * H / k, static_cast<long double>(k));
        if (!(o(k - 1, 0) <= bound)) ++ck1_bad;
      }
  d.add("C_last=1 violations %d, C_11 mismatches %d, C_k1 bound violations %d", last_bad, c11_bad, ck1_bad);
  out.pass = general_bad == 0 && ordered_bad == 0 && last_bad == 0 && c11_bad == 0 && ck1_bad == 0;
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------------
// 2. Visitation bounds and inductive inequalities

struct BoundTally {
  long checks = 0;
  long violations = 0;
  double worst = 0.0;  // largest violation seen (absolute for Q, relative for C)
};

void check_visitation(const LayeredMdp& mdp, const ActionSetTable& active, const StateTable& Q, double factor,
                      BoundTally& tally) {
  const int k = mdp.width();
  for (int i = 0; i + 1 < mdp.horizon(); ++i)
    for (int l = 0; l < k; ++l)
      for (int s = 0; s < k; ++s)
        for (Action a : active.at(l, i)) {
          const double bound = Q(l, i) / factor * mdp.transition(l, i, a, s);
          ++tally.checks;
          if (Q(s, i + 1) < bound - 1e-9) {
            ++tally.violations;
            tally.worst = std::max(tally.worst, bound - Q(s, i + 1));
          }
        }
}

void check_stay(const LayeredMdp& mdp, const ActionSetTable& active, const StateTable& Q, BoundTally& tally) {
  const double factor = std::exp(-static_cast<double>(mdp.width()) / mdp.horizon());
  for (int i = 0; i + 1 < mdp.horizon(); ++i)
    for (int l = 0; l < mdp.width(); ++l) {
      double best = 0.0;
      for (Action a : active.at(l, i)) best = std::max(best, mdp.transition(l, i, a, l));
      const double bound = factor * Q(l, i) * best;
      ++tally.checks;
      if (Q(l, i + 1) < bound - 1e-9) {
        ++tally.violations;
        tally.worst = std::max(tally.worst, bound - Q(l, i + 1));
      }
    }
}

void check_induction(const LayeredMdp& mdp, const ActionSetTable& active, const StateTable& Q,
                     const ThresholdTable& C, BoundTally& tally) {
  const int k = mdp.width();
  for (int i = 0; i < mdp.horizon(); ++i)
    for (int l = 0; l < k; ++l) {
      if (Q(l, i) <= 0.0) continue;
      for (Action a : active.at(l, i)) {
        long double lhs = 1.0L / Q(l, i);
        if (i + 1 < mdp.horizon())
          for (int s = 0; s < k; ++s) {
            const double p = mdp.transition(l, i, a, s);
            if (p > 0.0) lhs += p * C(s, i + 1) / Q(s, i + 1);
          }
        const long double rhs = C(l, i) / Q(l, i);
        ++tally.checks;
        const double excess = static_cast<double>(lhs / rhs - 1.0L);
        if (excess > 1e-9) {
          ++tally.violations;
          tally.worst = std::max(tally.worst, excess);
        }
      }
    }
}

Outcome bounds_criterion() {
  BoundTally uniform, induction_general, mixed, stay, induction_ordered;
  Rng rng(202);
  for (int n = 0; n < 200; ++n) {
    const int H = 1 + static_cast<int>(rng.below(8));
    const int k = 1 + static_cast<int>(rng.below(4));
    const int A = 1 + static_cast<int>(rng.below(4));
    const LayeredMdp mdp = random_generic(H, k, A, rng, false);
    const ActionSetTable active = n % 2 == 0 ? ActionSetTable(mdp.shape()) : random_active(mdp.shape(), rng);
    const Exploration e = sample_exploration_general(active, rng);
    const StateTable Q = visitation_probabilities(mdp, e.profile);
    check_visitation(mdp, active, Q, A, uniform);
    check_induction(mdp, active, Q, thresholds_general(H, k, A), induction_general);
  }
  for (int n = 0; n < 200; ++n) {
    const int H = 1 + static_cast<int>(rng.below(8));
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(std::min(H, 4))));
    const int A = 1 + static_cast<int>(rng.below(4));
    const LayeredMdp mdp = random_generic(H, k, A, rng, true);
    const ActionSetTable active = n % 2 == 0 ? ActionSetTable(mdp.shape()) : random_active(mdp.shape(), rng);
    const Exploration e = sample_exploration_ordered(active, orders_of(mdp), rng);
    const StateTable Q = visitation_probabilities(mdp, e.profile);
    check_visitation(mdp, active, Q, 2.0 * H * A / k, mixed);
    check_stay(mdp, active, Q, stay);
    check_induction(mdp, active, Q, thresholds_ordered(H, k, A), induction_ordered);
  }
  Outcome out;
  Detail d;
  auto report = [&](const char* name, const BoundTally& t) {
    d.add("%s %ld/%ld", name, t.checks - t.violations, t.checks);
    if (t.violations > 0) {
      d.add("%s worst %.3g", name, t.worst);
      out.pass = false;
    }
  };
  report("uniform visitation", uniform);
  report("general induction", induction_general);
  report("ordered visitation", mixed);
  report("ordered stay", stay);
  report("ordered induction", induction_ordered);
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------------
// 3. Optimal policy against enumeration

Outcome optimal_criterion() {
  Rng rng(303);
  int instances = 0, mismatches = 0;
  double enumerated = 0.0, worst = 0.0;
  while (instances < 50) {
    const int H = 1 + static_cast<int>(rng.below(6));
    const int k = 1 + static_cast<int>(rng.below(3));
    const int A = 2 + static_cast<int>(rng.below(3));
    if (std::pow(static_cast<double>(A), k * H) > 4096.0) continue;
    const LayeredMdp mdp = random_generic(H, k, A, rng, instances % 3 == 0 && k <= H);
    double best = -1.0;
    testing::for_each_policy(mdp.shape(), [&](const Policy& p) { best = std::max(best, forward_value(mdp, p)); });
    enumerated += testing::policy_count(mdp.shape());
    const OptimalSolution opt = optimal_policy(mdp);
    const double gap = std::max(std::fabs(opt.value - best), std::fabs(forward_value(mdp, opt.policy) - best));
    worst = std::max(worst, gap);
    if (gap > 1e-12) ++mismatches;
    ++instances;
  }
  Outcome out;
  out.pass = mismatches == 0;
  Detail d;
  d.add("%d instances, %.0f policies enumerated, %d mismatches, largest gap %.2g", instances, enumerated, mismatches,
        worst);
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------------
// 4. Phi difference against Q times V difference

Outcome decomposition_criterion() {
  Rng rng(404);
  double worst = 0.0;
  int triples = 0, bad = 0;
  while (triples < 100) {
    const int H = 2 + static_cast<int>(rng.below(5));
    const int k = 1 + static_cast<int>(rng.below(4));
    const int A = 2 + static_cast<int>(rng.below(3));
    const bool ordered = rng.uniform() < 0.5 && k <= H;
    const LayeredMdp mdp = random_generic(H, k, A, rng, ordered);
    const MdpShape& shape = mdp.shape();
    // A randomized exploration law with random weights on random subsets.
    RandomizedStageProfile profile(shape);
    const ActionSetTable active = random_active(shape, rng);
    for (int i = 0; i < H; ++i)
      for (int l = 0; l < k; ++l) {
        double total = 0.0;
        std::vector<double> w(static_cast<std::size_t>(A), 0.0);
        for (Action a : active.at(l, i)) total += w[static_cast<std::size_t>(a)] = 0.05 + rng.uniform();
        for (Action a = 0; a < A; ++a) profile.set(l, i, a, w[static_cast<std::size_t>(a)] / total);
      }
    Policy tail(k, H);
    for (int i = 0; i < H; ++i)
      for (int l = 0; l < k; ++l) tail.set(l, i, static_cast<Action>(rng.below(static_cast<std::size_t>(A))));
    const int i = static_cast<int>(rng.below(static_cast<std::size_t>(H)));
    const int l = static_cast<int>(rng.below(static_cast<std::size_t>(k)));
    const Action a = static_cast<Action>(rng.below(static_cast<std::size_t>(A)));
    const Action b = static_cast<Action>(rng.below(static_cast<std::size_t>(A)));

    // Composite law: the profile before stage i and at the other states of
    // stage i, the chosen action at (l, i), the tail after stage i.
    auto composite = [&](Action x) {
      RandomizedStageProfile p = profile;
      for (int s = i; s < H; ++s)
        for (int m = 0; m < k; ++m) {
          if (s == i && m != l) continue;
          const Action chosen = s == i ? x : tail(m, s);
          for (Action c = 0; c < A; ++c) p.set(m, s, c, c == chosen ? 1.0 : 0.0);
        }
      return p;
    };
    auto tail_with = [&](Action x) {
      Policy p = tail;
      p.set(l, i, x);
      return p;
    };
    const std::vector<std::vector<double>> q = testing::forward_visitation(mdp, profile);
    const double lhs = profile_value(mdp, composite(a)) - profile_value(mdp, composite(b));
    const double rhs = q[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
                       (conditional_value(mdp, tail_with(a), l, i) - conditional_value(mdp, tail_with(b), l, i));
    const double err = std::fabs(lhs - rhs);
    worst = std::max(worst, err);
    if (err > 1e-9) ++bad;
    ++triples;
  }
  Outcome out;
  out.pass = bad == 0;
  Detail d;
  d.add("%d triples, %d beyond 1e-9, largest error %.2g", triples, bad, worst);
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------------
// 5. Retention of optimal actions in one phase

Outcome retention_criterion() {
  const int H = 3, k = 2, A = 2;
  const std::int64_t T = 100000;
  const double epsilon = 0.25;
  const ThresholdTable C = thresholds_general(H, k, A);
  int retained = 0;
  const int phases = 200;
  for (int n = 0; n < phases; ++n) {
    Rng g(5000 + static_cast<std::uint64_t>(n));
    const LayeredMdp mdp = random_generic(H, k, A, g, false);
    const OptimalSolution opt = optimal_policy(mdp);
    Environment env(mdp, FeedbackMode::Bandit, Rng::derive(static_cast<std::uint64_t>(n), 0), T);
    Rng learner(Rng::derive(static_cast<std::uint64_t>(n), 1));
    const PhaseReport report = exp_ref(env, ActionSetTable(mdp.shape()), epsilon, T, C, Variant::General, learner);
    bool all = true;
    for (int i = 0; i < H && all; ++i) {
      std::vector<double> next(static_cast<std::size_t>(k), 0.0);
      if (i + 1 < H)
        for (int s = 0; s < k; ++s) next[static_cast<std::size_t>(s)] = opt.values(s, i + 1);
      const std::vector<double> q = stage_q_values(mdp, i, next);
      for (int l = 0; l < k && all; ++l) {
        // Some action attaining Opt_{l,i} must survive.
        bool kept = false;
        for (Action a : report.refined.at(l, i))
          if (q[static_cast<std::size_t>(l * A + a)] >= opt.values(l, i) - kOptimalTieTolerance) kept = true;
        all = kept;
      }
    }
    if (all) ++retained;
  }
  Outcome out;
  const double rate = static_cast<double>(retained) / phases;
  out.pass = rate >= 0.99;
  Detail d;
  d.add("optimal actions retained in %d/%d phases (%.1f%%, need >= 99%%)", retained, phases, 100.0 * rate);
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------------
// 6. Doubling schedule

Outcome doubling_criterion() {
  Outcome out;
  Detail d;
  int grid = 0, count_bad = 0, budget_bad = 0, budget_checked = 0;
  double worst_ratio = 0.0;
  for (int H : {2, 3, 5, 10, 15})
    for (int k : {1, 2, 4})
      for (int A : {2, 3, 5})
        for (std::int64_t T : {1000LL, 12345LL, 100000LL, 2000000LL, 50000000LL, 1000000000LL}) {
          const double x = static_cast<double>(T) / (static_cast<double>(H) * k * A * std::log(static_cast<double>(T)));
          const double half_log = 0.5 * std::log2(x);
          if (half_log == std::floor(half_log)) continue;  // the loop stops one phase early on exact powers
          const DoublingSchedule s = doubling_schedule(H, k, A, T);
          ++grid;
          const int expected = static_cast<int>(std::floor(half_log));
          if (s.last_phase() != std::max(expected, -1)) ++count_bad;
          if (T >= 1000LL * H * k * A) {
            ++budget_checked;
            const double ratio = static_cast<double>(s.scheduled_episodes) / static_cast<double>(T);
            worst_ratio = std::max(worst_ratio, ratio);
            if (ratio > 16.0) ++budget_bad;
          }
        }
  d.add("last phase index matches floor(log2(T/(HkA ln T))/2) on %d/%d grid points", grid - count_bad, grid);
  d.add("scheduled/T <= 16 on %d/%d (largest %.2f)", budget_checked - budget_bad, budget_checked, worst_ratio);

  int runs = 0, played_bad = 0, truncated = 0;
  Rng g(606);
  for (std::int64_t T : {2LL, 7LL, 500LL, 4000LL, 20000LL, 77777LL, 300000LL}) {
    for (Variant variant : {Variant::General, Variant::Ordered}) {
      const LayeredMdp mdp = random_generic(3, 2, 2, g, variant == Variant::Ordered);
      Environment env(mdp, FeedbackMode::Bandit, 9, T);
      DoublingReport report;
      const LearnerRun run = doubling(env, variant, 10, &report);
      ++runs;
      if (env.played() != T || run.total_episodes() != T) ++played_bad;
      for (const PhaseReport& p : report.phases)
        if (!p.complete) ++truncated;
    }
  }
  d.add("exactly T episodes in %d/%d runs (%d truncated phases)", runs - played_bad, runs, truncated);
  out.pass = count_bad == 0 && budget_bad == 0 && played_bad == 0 && truncated > 0;
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------------
// 7 and 9. Desk-scale grids on I1 and I2

struct DeskGrid {
  bool ran = false;
  std::map<std::string, GridResult> results;  // by instance family
};

DeskGrid& desk_grid() {
  static DeskGrid grid;
  if (grid.ran) return grid;
  for (const char* family : {"I1", "I2"}) {
    ExperimentConfig config;
    config.instance = family;
    config.H = {15};
    config.k = {2, 3, 4};
    config.A = 5;
    config.T = 100000;
    config.seeds = {1, 2, 3, 4, 5};
    grid.results[family] = run_grid(config, false);
  }
  grid.ran = true;
  return grid;
}

const PanelSummary* find_panel(const GridResult& result, const std::string& label, const std::string& algorithm) {
  for (const PanelSummary& s : result.summaries)
    if (s.instance == label && s.algorithm == algorithm) return &s;
  return nullptr;
}

std::string panel_label(const std::string& family, int k) {
  return family + "_H15_k" + std::to_string(k) + "_A5";
}

Outcome desk_ordering_criterion() {
  DeskGrid& grid = desk_grid();
  Outcome out;
  Detail d;
  for (const auto& [family, result] : grid.results) {
    if (!result.ok()) {
      d.add("%s: %zu failed cells", family.c_str(), result.failures.size());
      out.pass = false;
    }
    for (int k : {2, 3, 4}) {
      const std::string label = panel_label(family, k);
      const PanelSummary* u = find_panel(result, label, "ucbvi");
      const PanelSummary* o = find_panel(result, label, "ordered");
      const PanelSummary* e = find_panel(result, label, "expref");
      if (!u || !o || !e) {
        d.add("%s missing", label.c_str());
        out.pass = false;
        continue;
      }
      const double ru = u->mean.back(), ro = o->mean.back(), re = e->mean.back();
      const bool ok = ru < ro && ro < re;
      if (!ok) out.pass = false;
      d.add("%s ucbvi %.0f ordered %.0f expref %.0f %s", label.c_str(), ru, ro, re, ok ? "ok" : "out of order");
    }
  }
  out.detail = d.str();
  return out;
}

// Minimum learner seconds per instance over seeds and repeats. Instances are
// interleaved inside every repeat so a slow period on the machine affects them
// alike, and the minimum is the statistic least disturbed by other load.
std::vector<double> min_learner_seconds(const std::vector<ExperimentInstance>& instances, Algorithm algorithm,
                                        int repeats) {
  std::vector<double> best(instances.size(), std::numeric_limits<double>::infinity());
  for (int r = 0; r < repeats; ++r)
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      for (std::size_t n = 0; n < instances.size(); ++n) {
        CellSpec cell;
        cell.instance = instances[n];
        cell.algorithm = algorithm;
        cell.seed = seed;
        cell.T = 100000;
        cell.stride = 1000;
        best[n] = std::min(best[n], run_cell(cell).learner_seconds);
      }
  return best;
}

Outcome runtime_criterion() {
  ExperimentConfig config;
  config.instance = "I1";
  config.H = {15};
  config.k = {2, 3, 4};
  config.A = 5;
  const std::vector<ExperimentInstance> instances = build_instances(config);
  Outcome out;
  Detail d;
  // Every cell plays the same T, so seconds compare as per-episode times.
  const double ucb = min_learner_seconds({instances.back()}, Algorithm::UcbVi, 1).front();
  const double exp = min_learner_seconds({instances.back()}, Algorithm::ExpRef, 3).front();
  const double ratio = ucb / exp;
  d.add("ucbvi/expref at k=4: %.1fx", ratio);
  if (!(ratio > 1.5)) out.pass = false;
  for (Algorithm algorithm : {Algorithm::ExpRef, Algorithm::OrderedExpRef}) {
    const std::vector<double> seconds = min_learner_seconds(instances, algorithm, 4);
    const auto [lo, hi] = std::minmax_element(seconds.begin(), seconds.end());
    std::string per_k;
    for (double s : seconds) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%.3f", per_k.empty() ? "" : "/", 1e6 * s / 100000.0);
      per_k += buf;
    }
    const double spread = (*hi - *lo) / *lo;
    d.add("%s us/episode k=2/3/4 %s, spread %.1f%%", std::string(to_string(algorithm)).c_str(), per_k.c_str(),
          100.0 * spread);
    if (!(spread < 0.10)) out.pass = false;
  }
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------------
// 8. Square-root growth of ExpRef regret

Outcome growth_criterion() {
  ExperimentConfig config;
  config.instance = "I1";
  config.H = {6};
  config.k = {2};
  config.A = 3;
  config.T = 100000;
  config.algorithms = {Algorithm::ExpRef};
  config.seeds.clear();
  for (std::uint64_t s = 1; s <= 10; ++s) config.seeds.push_back(s);
  const GridResult result = run_grid(config, false);
  if (!result.ok() || result.traces.size() != 10) return {false, "grid failed"};
  double at_t = 0.0, at_quarter = 0.0;
  for (const RegretTrace& t : result.traces) {
    at_t += t.cum_at(config.T);
    at_quarter += t.cum_at(config.T / 4);
  }
  const double factor = at_t / at_quarter;
  Outcome out;
  out.pass = factor >= 1.7 && factor <= 2.8;
  Detail d;
  d.add("mean regret %.1f at T/4, %.1f at T, factor %.3f (need [1.7, 2.8])", at_quarter / 10, at_t / 10, factor);
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------------
// 10. Lower-bound families

// Values of every deterministic policy of an instance with deterministic
// transitions, by walking the single path each policy takes.
class PathWalker {
 public:
  explicit PathWalker(const LayeredMdp& mdp) : mdp_(mdp) {
    const int H = mdp.horizon(), k = mdp.width(), A = mdp.num_actions();
    next_.assign(static_cast<std::size_t>(H * k * A), 0);
    reward_.assign(static_cast<std::size_t>(H * k * A), 0.0);
    for (int i = 0; i < H; ++i)
      for (int l = 0; l < k; ++l)
        for (Action a = 0; a < A; ++a) {
          const std::size_t c = cell(l, i, a);
          reward_[c] = mdp.model(l, i, a).reward.mean();
          if (i + 1 == H) continue;
          int target = -1;
          for (int s = 0; s < k; ++s) {
            const double p = mdp.transition(l, i, a, s);
            if (p == 1.0) target = s;
            else if (p != 0.0) deterministic_ = false;
          }
          if (target < 0) deterministic_ = false;
          next_[c] = target;
        }
  }
  bool deterministic() const { return deterministic_; }

  // Policy digits indexed stage * width + level.
  double value(const std::vector<int>& digits) const {
    int level = mdp_.start_level();
    double total = 0.0;
    for (int i = 0; i < mdp_.horizon(); ++i) {
      const std::size_t c = cell(level, i, digits[static_cast<std::size_t>(i * mdp_.width() + level)]);
      total += reward_[c];
      level = next_[c];
    }
    return total;
  }

 private:
  std::size_t cell(int l, int i, Action a) const {
    return (static_cast<std::size_t>(i) * mdp_.width() + l) * mdp_.num_actions() + a;
  }
  const LayeredMdp& mdp_;
  std::vector<int> next_;
  std::vector<double> reward_;
  bool deterministic_ = true;
};

struct FamilyCheck {
  std::size_t specs = 0;
  double policies = 0.0;
  long off_values = 0;
  long overlaps = 0;
  long empty_optimal = 0;
};

// Walks every policy of every instance, recording which ones reach 1/2 + eps.
FamilyCheck check_family(const std::vector<LayeredMdp>& family, double epsilon) {
  FamilyCheck check;
  check.specs = family.size();
  const MdpShape& shape = family.front().shape();
  const std::size_t cells = shape.num_states();
  std::size_t total = 1;
  for (std::size_t c = 0; c < cells; ++c) total *= static_cast<std::size_t>(shape.num_actions);
  std::vector<std::uint32_t> owner(total, 0);  // bit per instance
  for (std::size_t n = 0; n < family.size(); ++n) {
    const PathWalker walker(family[n]);
    if (!walker.deterministic()) {
      ++check.off_values;
      continue;
    }
    std::vector<int> digits(cells, 0);
    std::size_t optimal = 0;
    for (std::size_t index = 0; index < total; ++index) {
      const double v = walker.value(digits);
      if (std::fabs(v - (0.5 + epsilon)) < 1e-12) {
        owner[index] |= 1u << n;
        ++optimal;
      } else if (std::fabs(v - 0.5) >= 1e-12) {
        ++check.off_values;
      }
      for (std::size_t c = 0; c < cells; ++c) {
        if (++digits[c] < shape.num_actions) break;
        digits[c] = 0;
      }
    }
    if (optimal == 0) ++check.empty_optimal;
    check.policies += static_cast<double>(total);
  }
  for (std::uint32_t bits : owner)
    if (bits & (bits - 1)) ++check.overlaps;
  return check;
}

Outcome hard_criterion() {
  const double epsilon = 0.1;
  std::vector<LayeredMdp> general;
  const int H = 4, A = 2;
  for (int code = 0; code < 16; ++code) {
    HardInstanceGeneralSpec spec;
    spec.A = A;
    spec.epsilon = epsilon;
    for (int i = 0; i < H; ++i) spec.theta.push_back((code >> i) & 1);
    general.push_back(hard_instance_general(spec));
  }
  std::vector<LayeredMdp> ordered;
  for (const HardInstanceOrderedSpec& spec : enumerate_hard_ordered(5, 1, 2, epsilon))
    ordered.push_back(hard_instance_ordered(spec, 5, 2));
  const FamilyCheck g = check_family(general, epsilon);
  const FamilyCheck o = check_family(ordered, epsilon);
  Outcome out;
  Detail d;
  for (const auto& [name, c] : {std::pair<const char*, const FamilyCheck&>{"general H=4 A=2", g},
                                std::pair<const char*, const FamilyCheck&>{"ordered H=5 k=1 A=2", o}}) {
    d.add("%s: %zu specs, %.0f policy values, %ld outside {1/2, 1/2+eps}, %ld shared optima, %ld specs without optimum",
          name, c.specs, c.policies, c.off_values, c.overlaps, c.empty_optimal);
    if (c.off_values || c.overlaps || c.empty_optimal || c.specs == 0) out.pass = false;
  }
  if (o.specs != 8) out.pass = false;
  out.detail = d.str();
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "threshold formulas", thresholds_criterion},
      {2, "visitation bounds and inductive inequalities", bounds_criterion},
      {3, "optimal policy equals enumeration", optimal_criterion},
      {4, "phi difference decomposition", decomposition_criterion},
      {5, "retention of optimal actions", retention_criterion},
      {6, "doubling schedule", doubling_criterion},
      {7, "desk-scale regret ordering", desk_ordering_criterion},
      {8, "square-root regret growth", growth_criterion},
      {9, "runtime asymmetry", runtime_criterion},
      {10, "lower-bound dichotomy", hard_criterion},
  };
  std::set<int> selected;
  for (int n = 1; n < argc; ++n) selected.insert(std::stoi(argv[n]));
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome result;
    try {
      result = c.run();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!result.pass) ++failures;
    std::printf("%s %2d %s [%.2f s]: %s\n", result.pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                result.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
