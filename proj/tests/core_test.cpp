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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "bfmdp/dynamic_programming.hpp"
#include "bfmdp/instances.hpp"
#include "bfmdp/kernels.hpp"
#include "bfmdp/mdp.hpp"
#include "bfmdp/rng.hpp"
#include "bfmdp/serialization.hpp"
#include "bfmdp/simulate.hpp"
#include "support.hpp"

using namespace bfmdp;
using bfmdp::testing::chain_mdp;
using bfmdp::testing::enumerate_value;
using bfmdp::testing::for_each_policy;

namespace {

LayeredMdp zero_reward_mdp() {
  Rng rng(11);
  LayeredMdp base = random_generic(4, 3, 2, rng, false);
  LayeredMdpData data = base.data();
  for (StateActionModel& m : data.models) {
    m.reward = DiscreteDistribution::point(0.0);
    m.transition_given_reward.clear();
  }
  return LayeredMdp(std::move(data));
}

// Two i.i.d. stages, X uniform on {0, 1}, one item.
ProphetSpec coin_prophet(int H) {
  ProphetSpec spec;
  spec.H = H;
  spec.k = 1;
  spec.A = 2;
  spec.values.assign(static_cast<std::size_t>(H), DiscreteDistribution{{0.0, 1.0}, {0.5, 0.5}});
  spec.value_scale = 1.0;
  return spec;
}

RandomizedStageProfile uniform_profile(const MdpShape& shape) {
  RandomizedStageProfile p(shape);
  for (int i = 0; i < shape.horizon; ++i)
    for (int l = 0; l < shape.width; ++l)
      for (int a = 0; a < shape.num_actions; ++a) p.set(l, i, a, 1.0 / shape.num_actions);
  return p;
}

Policy sample_policy(const RandomizedStageProfile& profile, Rng& rng) {
  const MdpShape& s = profile.shape();
  Policy policy(s.width, s.horizon);
  for (int i = 0; i < s.horizon; ++i)
    for (int l = 0; l < s.width; ++l) {
      double u = rng.uniform();
      Action pick = s.num_actions - 1;
      for (int a = 0; a < s.num_actions; ++a) {
        u -= profile.probability(l, i, a);
        if (u < 0.0) {
          pick = a;
          break;
        }
      }
      policy.set(l, i, pick);
    }
  return policy;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("vector backup and push agree with scalar") {
    if (!kernels::avx2_available()) return;
    Rng rng(5);
    for (std::size_t rows : {1u, 3u, 4u, 5u, 8u, 13u, 37u}) {
      for (std::size_t succ : {1u, 2u, 5u, 9u}) {
        const kernels::StageShape shape{rows, succ};
        std::vector<double> matrix(rows * succ), bias(rows), next(succ), weight(rows);
        for (double& x : matrix) x = rng.uniform();
        for (double& x : bias) x = rng.uniform();
        for (double& x : next) x = rng.uniform();
        for (double& x : weight) x = rng.uniform();
        std::vector<double> a(rows), b(rows), pa(succ), pb(succ);
        kernels::scalar::backup(shape, matrix, bias, next, a);
        kernels::avx2::backup(shape, matrix, bias, next, b);
        kernels::scalar::push(shape, matrix, weight, pa);
        kernels::avx2::push(shape, matrix, weight, pb);
        for (std::size_t r = 0; r < rows; ++r) CHECK(b[r] == doctest::Approx(a[r]).epsilon(1e-13));
        for (std::size_t s = 0; s < succ; ++s) CHECK(pb[s] == doctest::Approx(pa[s]).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("oracles agree across kernel targets") {
    if (!kernels::avx2_available()) return;
    Rng rng(6);
    const LayeredMdp mdp = random_generic(7, 4, 3, rng, false);
    kernels::select(kernels::Target::Scalar);
    const OptimalSolution s = optimal_policy(mdp);
    kernels::select(kernels::Target::Avx2);
    const OptimalSolution v = optimal_policy(mdp);
    CHECK(s.policy == v.policy);
    CHECK(v.value == doctest::Approx(s.value).epsilon(1e-13));
  }

  TEST_CASE("target names round-trip") {
    CHECK(kernels::parse_target("scalar") == kernels::Target::Scalar);
    CHECK(kernels::parse_target(kernels::name(kernels::Target::Avx2)) == kernels::Target::Avx2);
    CHECK_THROWS_AS(kernels::parse_target("neon"), std::invalid_argument);
  }
}

TEST_SUITE("rng") {
  TEST_CASE("same seed, same stream") {
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
      const double x = a.uniform();
      CHECK(x == b.uniform());
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
      differs |= x != c.uniform();
    }
    CHECK(differs);
  }

  TEST_CASE("uniform uses the top 53 bits of mt19937_64") {
    std::mt19937_64 engine(7);
    Rng rng(7);
    for (int i = 0; i < 10; ++i) CHECK(rng.uniform() == static_cast<double>(engine() >> 11) * 0x1.0p-53);
  }

  TEST_CASE("derived streams are distinct") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 50; ++s)
      for (std::uint64_t j = 0; j < 4; ++j) seen.insert(Rng::derive(s, j));
    CHECK(seen.size() == 200);
    CHECK(Rng::derive(3, 1) == Rng::derive(3, 1));
  }

  TEST_CASE("below stays in range") {
    Rng rng(1);
    std::vector<int> counts(3, 0);
    for (int i = 0; i < 30000; ++i) ++counts[rng.below(3)];
    for (int c : counts) CHECK(std::abs(c - 10000) < 3 * std::sqrt(30000 * (1.0 / 3) * (2.0 / 3)));
  }
}

TEST_SUITE("validate") {
  TEST_CASE("short kernel row is named") {
    Rng rng(2);
    LayeredMdpData data = random_generic(3, 2, 2, rng, false).data();
    StateActionModel& m = data.models[(0 * 2 + 1) * 2 + 1];  // stage 0, level 1, action 1
    m.transition = {0.5, 0.48};
    m.transition_given_reward.clear();
    const ValidationReport report = validate(LayeredMdp(std::move(data)));
    REQUIRE_FALSE(report.ok());
    REQUIRE(report.has(Violation::Kind::KernelRowSum));
    const auto it = std::find_if(report.violations.begin(), report.violations.end(),
                                 [](const Violation& v) { return v.kind == Violation::Kind::KernelRowSum; });
    CHECK(it->stage == 0);
    CHECK(it->level == 1);
    CHECK(it->action == 1);
    CHECK(report.summary().find("0.97") != std::string::npos);
  }

  TEST_CASE("prophet instances validate") {
    for (int k = 1; k <= 3; ++k) {
      const ValidationReport r = validate(compile_prophet(prophet_uniform(6, k, 4)));
      CHECK_MESSAGE(r.ok(), r.summary());
    }
  }

  TEST_CASE("ordered instance moving up a level is rejected") {
    Rng rng(3);
    LayeredMdpData data = random_generic(3, 3, 2, rng, true).data();
    StateActionModel& m = data.models[(0 * 3 + 1) * 2 + 0];  // stage 0, level 1, action 0
    m.transition = {0.5, 0.4, 0.1};
    m.transition_given_reward.clear();
    const ValidationReport r = validate(LayeredMdp(std::move(data)));
    CHECK(r.has(Violation::Kind::OrderedDownward));
  }

  TEST_CASE("stay probabilities must follow the order") {
    auto mdp = chain_mdp(
        2, 2, 2, [](int, int, int) { return 0.0; }, [](int l, int, int a) { return a == 0 ? l : 0; }, 1);
    LayeredMdpData data = mdp.data();
    data.ordering = std::vector<ActionOrder>(4, ActionOrder{1, 0});
    CHECK(validate(LayeredMdp(data)).ok());
    data.ordering = std::vector<ActionOrder>(4, ActionOrder{0, 1});
    CHECK(validate(LayeredMdp(data)).has(Violation::Kind::OrderedStayMonotone));
  }

  TEST_CASE("total reward above one is rejected") {
    auto mdp = chain_mdp(
        3, 1, 2, [](int, int, int a) { return a == 1 ? 0.4 : 0.0; }, [](int, int, int) { return 0; });
    CHECK(validate(mdp).has(Violation::Kind::TotalRewardBound));
    CHECK(max_realizable_reward(mdp) == doctest::Approx(1.2));
  }

  TEST_CASE("reward bound follows the coupled outcomes") {
    // Accepting the 1 moves to the exhausted level, so a path can never
    // collect two 1s even though every stage can pay 1.
    const LayeredMdp mdp = compile_prophet(coin_prophet(3));
    CHECK(max_realizable_reward(mdp) == 1.0);
    CHECK(validate(mdp).ok());
  }
}

TEST_SUITE("simulate") {
  TEST_CASE("zero rewards give zero") {
    const LayeredMdp mdp = zero_reward_mdp();
    Rng rng(1);
    for (int t = 0; t < 100; ++t) CHECK(simulate_aggregate(mdp, Policy(3, 4, 1), rng) == 0.0);
  }

  TEST_CASE("deterministic kernel follows the unique path") {
    const LayeredMdp mdp = chain_mdp(
        4, 3, 2, [](int l, int i, int) { return 0.05 * l + 0.01 * i; },
        [](int l, int, int a) { return a == 0 ? l : (l + 1) % 3; });
    const Policy policy = Policy::parse("1 0 1 0;0 1 1 0;1 1 0 0");
    Rng a(9), b(123);
    const EpisodeOutcome x = simulate_episode(mdp, policy, FeedbackMode::SemiBandit, a);
    const EpisodeOutcome y = simulate_episode(mdp, policy, FeedbackMode::SemiBandit, b);
    REQUIRE(x.trajectory);
    CHECK(*x.trajectory == *y.trajectory);
    CHECK(x.aggregate_reward == y.aggregate_reward);
    // 0 -(1)-> 1 -(1)-> 2 -(0)-> 2 -> end
    const std::vector<VisitedState> path{{0, 0}, {1, 1}, {2, 2}, {2, 3}};
    CHECK(*x.trajectory == path);
  }

  TEST_CASE("feedback modes filter the outcome") {
    Rng g(4);
    const LayeredMdp mdp = random_generic(5, 3, 3, g, false);
    const Policy policy(3, 5, 2);
    Rng r1(8), r2(8), r3(8);
    const EpisodeOutcome bandit = simulate_episode(mdp, policy, FeedbackMode::Bandit, r1);
    const EpisodeOutcome traj = simulate_episode(mdp, policy, FeedbackMode::Trajectory, r2);
    const EpisodeOutcome semi = simulate_episode(mdp, policy, FeedbackMode::SemiBandit, r3);
    CHECK_FALSE(bandit.trajectory);
    CHECK_FALSE(bandit.step_rewards);
    CHECK(traj.trajectory);
    CHECK_FALSE(traj.step_rewards);
    REQUIRE(semi.step_rewards);
    CHECK(bandit.aggregate_reward == semi.aggregate_reward);
    double sum = 0.0;
    for (double r : *semi.step_rewards) sum += r;
    CHECK(sum == semi.aggregate_reward);
    REQUIRE(semi.trajectory->size() == 5);
    CHECK(semi.trajectory->front().level == mdp.start_level());
    for (int i = 0; i < 5; ++i) CHECK((*semi.trajectory)[static_cast<std::size_t>(i)].stage == i);
  }

  TEST_CASE("aggregate path matches the full simulator draw for draw") {
    Rng g(12);
    const LayeredMdp mdp = compile_prophet(prophet_random(6, 2, 4, g));
    const Policy policy(3, 6, 1);
    Rng r1(77), r2(77);
    for (int t = 0; t < 1000; ++t)
      CHECK(simulate_aggregate(mdp, policy, r1) ==
            simulate_episode(mdp, policy, FeedbackMode::SemiBandit, r2).aggregate_reward);
  }

  TEST_CASE("secret path pays Bern(1/2 + eps)") {
    const double eps = 0.1;
    HardInstanceGeneralSpec spec{3, {2, 0, 1, 1}, eps};
    const LayeredMdp mdp = hard_instance_general(spec);
    Policy theta(2, 4);
    for (int i = 0; i < 4; ++i) {
      theta.set(0, i, spec.theta[static_cast<std::size_t>(i)]);
      theta.set(1, i, 0);
    }
    Rng rng(2024);
    const int n = 100000;
    double sum = 0.0;
    for (int t = 0; t < n; ++t) sum += simulate_aggregate(mdp, theta, rng);
    const double p = 0.5 + eps;
    CHECK(std::abs(sum / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_SUITE("policy value") {
  TEST_CASE("zero rewards") { CHECK(policy_value(zero_reward_mdp(), Policy(3, 4, 1)) == 0.0); }

  TEST_CASE("two coin stages, accept only a 1") {
    const LayeredMdp mdp = compile_prophet(coin_prophet(2));
    // Width 2 (level 1 = one slot left), action 1 = threshold 1.
    const Policy accept_ones(2, 2, 1);
    // Stage 1: take the 1 w.p. 1/2; otherwise stage 2 pays 1 w.p. 1/2.
    CHECK(policy_value(mdp, accept_ones) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(enumerate_value(mdp, accept_ones) == doctest::Approx(0.75).epsilon(1e-15));
  }

  TEST_CASE("matches trajectory enumeration") {
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
      const bool ordered = trial % 2 == 1;
      const int H = 2 + trial % 4, k = 1 + trial % 3, A = 2 + trial % 2;
      const LayeredMdp mdp = random_generic(H, std::min(k, H), A, rng, ordered);
      Policy p(mdp.width(), H);
      for (int i = 0; i < H; ++i)
        for (int l = 0; l < mdp.width(); ++l) p.set(l, i, static_cast<Action>(rng.below(static_cast<std::size_t>(A))));
      CHECK(policy_value(mdp, p) == doctest::Approx(enumerate_value(mdp, p)).epsilon(1e-12));
    }
  }

  TEST_CASE("Monte Carlo mean agrees") {
    Rng g(31);
    const LayeredMdp mdp = compile_prophet(prophet_random(5, 2, 3, g));
    const Policy policy = Policy::parse("0 1 2 0 1;1 1 0 2 2;3 2 1 0 0");
    const double v = policy_value(mdp, policy);
    Rng rng(99);
    const int n = 1000000;
    double sum = 0.0, sq = 0.0;
    for (int t = 0; t < n; ++t) {
      const double r = simulate_aggregate(mdp, policy, rng);
      sum += r;
      sq += r * r;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean - v) < 3.0 * std::sqrt(var / n));
  }
}

TEST_SUITE("optimal policy") {
  TEST_CASE("single stage picks the best mean, lowest index on ties") {
    const LayeredMdp mdp = chain_mdp(
        1, 2, 4, [](int, int, int a) { return a == 1 || a == 3 ? 0.7 : 0.2; }, [](int, int, int) { return 0; }, 1);
    const OptimalSolution s = optimal_policy(mdp);
    CHECK(s.policy(1, 0) == 1);
    CHECK(s.value == 0.7);
  }

  TEST_CASE("equals exhaustive search") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
      const LayeredMdp mdp = random_generic(3, 2, 2, rng, trial % 2 == 0);
      double best = -1.0;
      for_each_policy(mdp.shape(), [&](const Policy& p) { best = std::max(best, enumerate_value(mdp, p)); });
      const OptimalSolution s = optimal_policy(mdp);
      CHECK(s.value == doctest::Approx(best).epsilon(1e-12));
      CHECK(policy_value(mdp, s.policy) == doctest::Approx(best).epsilon(1e-12));
    }
  }

  TEST_CASE("prophet optimum equals the best threshold matrix by realization enumeration") {
    Rng g(43);
    ProphetSpec spec = prophet_random(3, 2, 2, g);
    const LayeredMdp mdp = compile_prophet(spec);
    // Thresholds per (slots left, stage); realizations enumerated directly.
    double best = 0.0;
    const int actions = spec.A + 1;
    for (int code = 0; code < static_cast<int>(std::pow(actions, 6)); ++code) {
      int c = code;
      int thr[3][3] = {};
      for (int l = 1; l <= 2; ++l)
        for (int i = 0; i < 3; ++i) {
          thr[l][i] = c % actions;
          c /= actions;
        }
      double value = 0.0;
      for (int j0 = 0; j0 < 2; ++j0)
        for (int j1 = 0; j1 < 2; ++j1)
          for (int j2 = 0; j2 < 2; ++j2) {
            const int js[3] = {j0, j1, j2};
            double p = 1.0, total = 0.0;
            int slots = 2;
            for (int i = 0; i < 3; ++i) {
              const auto& x = spec.values[static_cast<std::size_t>(i)];
              p *= x.probs[static_cast<std::size_t>(js[i])];
              const int t = thr[slots][i];
              if (slots > 0 && t < 2 && x.support[static_cast<std::size_t>(js[i])] >= x.support[static_cast<std::size_t>(t)]) {
                total += x.support[static_cast<std::size_t>(js[i])] * spec.value_scale;
                --slots;
              }
            }
            value += p * total;
          }
      best = std::max(best, value);
    }
    CHECK(optimal_policy(mdp).value == doctest::Approx(best).epsilon(1e-12));
  }

  TEST_CASE("optimum dominates every policy") {
    Rng rng(47);
    const LayeredMdp mdp = random_generic(3, 2, 3, rng, false);
    const double opt = optimal_policy(mdp).value;
    for_each_policy(mdp.shape(), [&](const Policy& p) { CHECK(policy_value(mdp, p) <= opt + 1e-12); });
  }
}

TEST_SUITE("conditional value") {
  TEST_CASE("final stage is the immediate mean") {
    Rng rng(51);
    const LayeredMdp mdp = random_generic(4, 3, 3, rng, false);
    const Policy p(3, 4, 2);
    for (int l = 0; l < 3; ++l) CHECK(conditional_value(mdp, p, l, 3) == mdp.reward_mean(l, 3, 2));
  }

  TEST_CASE("start state gives the policy value") {
    Rng rng(52);
    const LayeredMdp mdp = random_generic(5, 2, 3, rng, false);
    const Policy p = Policy::parse("0 1 2 0 1;2 2 1 0 0");
    CHECK(conditional_value(mdp, p, mdp.start_level(), 0) == policy_value(mdp, p));
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 5; ++i)
        CHECK(conditional_value(mdp, p, l, i) == doctest::Approx(enumerate_value(mdp, p, l, i)).epsilon(1e-12));
  }

  TEST_CASE("forced-start Monte Carlo agrees") {
    Rng g(53);
    const LayeredMdp mdp = random_generic(5, 3, 2, g, false);
    const Policy p(3, 5, 1);
    const double v = conditional_value(mdp, p, 2, 2);
    Rng rng(54);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int t = 0; t < n; ++t) {
      const double r = simulate_from(mdp, p, 2, 2, rng);
      sum += r;
      sq += r * r;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean - v) < 3.0 * std::sqrt((sq / n - mean * mean) / n) + 1e-15);
  }
}

TEST_SUITE("visitation") {
  TEST_CASE("deterministic profile on a deterministic kernel") {
    const LayeredMdp mdp = chain_mdp(
        4, 3, 2, [](int, int, int) { return 0.0; }, [](int l, int, int a) { return a == 0 ? l : (l + 1) % 3; });
    const Policy p = Policy::parse("1 0 1 0;0 1 1 0;1 1 0 0");
    const StateTable q = visitation_probabilities(mdp, p);
    const int path[4] = {0, 1, 2, 2};
    for (int i = 0; i < 4; ++i)
      for (int l = 0; l < 3; ++l) CHECK(q(l, i) == (l == path[i] ? 1.0 : 0.0));
  }

  TEST_CASE("columns sum to one and match the forward recursion") {
    Rng rng(61);
    for (int trial = 0; trial < 20; ++trial) {
      const LayeredMdp mdp = random_generic(6, 4, 3, rng, trial % 2 == 0);
      const RandomizedStageProfile profile = uniform_profile(mdp.shape());
      const StateTable q = visitation_probabilities(mdp, profile);
      const auto oracle = bfmdp::testing::forward_visitation(mdp, profile);
      for (int i = 0; i < 6; ++i) {
        double col = 0.0;
        for (int l = 0; l < 4; ++l) {
          col += q(l, i);
          CHECK(q(l, i) == doctest::Approx(oracle[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)]).epsilon(1e-12));
        }
        CHECK(col == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("empirical visitation frequencies agree") {
    Rng g(62);
    const LayeredMdp mdp = random_generic(3, 3, 3, g, false);
    const RandomizedStageProfile profile = uniform_profile(mdp.shape());
    const StateTable q = visitation_probabilities(mdp, profile);
    Rng rng(63);
    const int n = 1000000;
    std::vector<double> counts(9, 0.0);
    for (int t = 0; t < n; ++t) {
      const Policy p = sample_policy(profile, rng);
      const EpisodeOutcome o = simulate_episode(mdp, p, FeedbackMode::Trajectory, rng);
      for (const VisitedState& s : *o.trajectory) counts[static_cast<std::size_t>(s.stage * 3 + s.level)] += 1.0;
    }
    for (int i = 0; i < 3; ++i)
      for (int l = 0; l < 3; ++l) {
        const double p = q(l, i);
        const double f = counts[static_cast<std::size_t>(i * 3 + l)] / n;
        CHECK(std::abs(f - p) <= 3.0 * std::sqrt(p * (1 - p) / n) + 1e-12);
      }
  }
}

TEST_SUITE("serialization") {
  TEST_CASE("round trip is bit exact") {
    Rng rng(71);
    std::vector<LayeredMdp> cases;
    cases.push_back(random_generic(5, 3, 3, rng, false));
    cases.push_back(random_generic(5, 3, 3, rng, true));
    cases.push_back(compile_prophet(prophet_random(4, 2, 3, rng)));
    cases.push_back(compile_posted_pricing(prophet_uniform(4, 2, 5)));
    for (const LayeredMdp& mdp : cases) {
      const std::string text = write_mdp(mdp);
      const LayeredMdp back = read_mdp(text);
      CHECK(back.data() == mdp.data());
      CHECK(write_mdp(back) == text);
    }
  }

  TEST_CASE("bad documents are rejected") {
    Rng rng(72);
    nlohmann::json doc = mdp_to_json(random_generic(3, 2, 2, rng, false));
    nlohmann::json wrong_version = doc;
    wrong_version["version"] = 99;
    CHECK_THROWS(mdp_from_json(wrong_version));
    nlohmann::json short_kernel = doc;
    short_kernel["kernel"].erase(0);
    CHECK_THROWS(mdp_from_json(short_kernel));
    CHECK_THROWS(load_mdp("/nonexistent/instance.json"));
  }

  TEST_CASE("policy text form") {
    const Policy p = Policy::parse("0 1 0;2 2 1");
    CHECK(p.width() == 2);
    CHECK(p.horizon() == 3);
    CHECK(p(1, 0) == 2);
    CHECK(p(0, 1) == 1);
    CHECK(p.to_string() == "0 1 0;2 2 1");
    CHECK_THROWS(Policy::parse("0 1;2"));
  }
}
