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
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bfmdp/instances.hpp"
#include "outcomes.hpp"

namespace bfmdp {

namespace {

void check_spec(const ProphetSpec& spec) {
  if (spec.H < 1 || spec.k < 1 || spec.A < 1) throw std::invalid_argument("prophet spec: H, k and A must be positive");
  if (spec.k > spec.H) throw std::invalid_argument("prophet spec: requires k <= H");
  if (spec.values.size() != static_cast<std::size_t>(spec.H))
    throw std::invalid_argument("prophet spec: need one value distribution per stage");
  if (!(spec.value_scale > 0.0) || !std::isfinite(spec.value_scale))
    throw std::invalid_argument("prophet spec: value_scale must be positive");
  std::vector<double> maxima;
  for (int i = 0; i < spec.H; ++i) {
    const DiscreteDistribution& x = spec.values[static_cast<std::size_t>(i)];
    if (auto problem = x.problem())
      throw std::invalid_argument("prophet spec: stage " + std::to_string(i) + " distribution: " + *problem);
    if (x.size() > static_cast<std::size_t>(spec.A))
      throw std::invalid_argument("prophet spec: stage " + std::to_string(i) + " has more than A support points");
    maxima.push_back(x.max_value() * spec.value_scale);
  }
  std::sort(maxima.begin(), maxima.end(), std::greater<>());
  const double best = std::accumulate(maxima.begin(), maxima.begin() + spec.k, 0.0);
  if (best > 1.0 + 1e-12)
    throw std::invalid_argument("prophet spec: scaled values can total more than 1 (value_scale too large)");
}

LayeredMdp compile_threshold_mdp(const ProphetSpec& spec, bool pricing) {
  check_spec(spec);
  const int width = spec.k + 1;
  const int actions = spec.reject_action ? spec.A + 1 : spec.A;
  LayeredMdpData data;
  data.shape = {spec.H, width, actions};
  data.start_level = spec.k;
  data.models.reserve(data.shape.num_state_actions());
  std::vector<ActionOrder> ordering;
  ActionOrder ascending(static_cast<std::size_t>(actions));
  std::iota(ascending.begin(), ascending.end(), 0);

  for (int stage = 0; stage < spec.H; ++stage) {
    const int next_width = stage + 1 < spec.H ? width : 0;
    const DiscreteDistribution& x = spec.values[static_cast<std::size_t>(stage)];
    for (int level = 0; level < width; ++level) {
      ordering.push_back(ascending);
      for (Action a = 0; a < actions; ++a) {
        std::vector<detail::Outcome> outcomes;
        if (level == 0) {
          outcomes.push_back({0.0, 0, 1.0});
        } else {
          const double tau = prophet_threshold(spec, stage, a);
          for (std::size_t j = 0; j < x.size(); ++j) {
            const double v = x.support[j];
            if (v >= tau) {
              const double paid = pricing ? tau : v;
              outcomes.push_back({paid * spec.value_scale, level - 1, x.probs[j]});
            } else {
              outcomes.push_back({0.0, level, x.probs[j]});
            }
          }
        }
        data.models.push_back(detail::model_from_outcomes(outcomes, next_width));
      }
    }
  }
  data.ordering = std::move(ordering);
  return LayeredMdp(std::move(data));
}

}  // namespace

double prophet_threshold(const ProphetSpec& spec, int stage, Action action) {
  const DiscreteDistribution& x = spec.values.at(static_cast<std::size_t>(stage));
  const int last = spec.reject_action ? spec.A : spec.A - 1;
  if (action < 0 || action > last) throw std::out_of_range("prophet_threshold: action out of range");
  if (static_cast<std::size_t>(action) >= x.size()) return std::numeric_limits<double>::infinity();
  return x.support[static_cast<std::size_t>(action)];
}

ProphetSpec prophet_uniform(int H, int k, int A) {
  if (A < 2) throw std::invalid_argument("prophet_uniform: requires A >= 2");
  if (k < 1 || H < 1 || k > H) throw std::invalid_argument("prophet_uniform: requires 1 <= k <= H");
  DiscreteDistribution x;
  for (int j = 0; j < A; ++j) {
    x.support.push_back(j == A - 1 ? 1.0 : static_cast<double>(j) / (A - 1));
    x.probs.push_back(1.0 / A);
  }
  ProphetSpec spec;
  spec.H = H;
  spec.k = k;
  spec.A = A;
  spec.values.assign(static_cast<std::size_t>(H), x);
  spec.value_scale = 1.0 / k;
  return spec;
}

ProphetSpec prophet_random(int H, int k, int A, Rng& rng) {
  if (A < 1) throw std::invalid_argument("prophet_random: requires A >= 1");
  if (k < 1 || H < 1 || k > H) throw std::invalid_argument("prophet_random: requires 1 <= k <= H");
  ProphetSpec spec;
  spec.H = H;
  spec.k = k;
  spec.A = A;
  spec.value_scale = 1.0 / k;
  for (int i = 0; i < H; ++i) {
    DiscreteDistribution x;
    for (int j = 0; j < A; ++j) x.support.push_back(rng.uniform());
    std::sort(x.support.begin(), x.support.end());
    std::vector<double> cuts;
    for (int j = 0; j + 1 < A; ++j) cuts.push_back(rng.uniform());
    std::sort(cuts.begin(), cuts.end());
    double previous = 0.0;
    for (double c : cuts) {
      x.probs.push_back(c - previous);
      previous = c;
    }
    x.probs.push_back(1.0 - previous);
    // Ties have probability zero for continuous draws but would break the
    // strictly ascending support; merge them if they ever occur.
    for (std::size_t j = 1; j < x.support.size();) {
      if (x.support[j] == x.support[j - 1]) {
        x.probs[j - 1] += x.probs[j];
        x.support.erase(x.support.begin() + static_cast<std::ptrdiff_t>(j));
        x.probs.erase(x.probs.begin() + static_cast<std::ptrdiff_t>(j));
      } else {
        ++j;
      }
    }
    spec.values.push_back(std::move(x));
  }
  return spec;
}

LayeredMdp compile_prophet(const ProphetSpec& spec) { return compile_threshold_mdp(spec, false); }

LayeredMdp compile_posted_pricing(const ProphetSpec& spec) { return compile_threshold_mdp(spec, true); }

LayeredMdp compile(const ProphetSpec& spec) {
  return spec.problem == ProphetProblem::Pricing ? compile_posted_pricing(spec) : compile_prophet(spec);
}

}  // namespace bfmdp
