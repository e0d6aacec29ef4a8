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
#include <numeric>
#include <stdexcept>

#include "bfmdp/instances.hpp"

namespace bfmdp {

namespace {

// Flat Dirichlet over `n` cells; with probability 1/5 a one-hot row instead.
std::vector<double> random_row(std::size_t n, Rng& rng) {
  std::vector<double> row(n, 0.0);
  if (rng.uniform() < 0.2) {
    row[rng.below(n)] = 1.0;
    return row;
  }
  double total = 0.0;
  for (double& x : row) total += (x = rng.exponential());
  if (!(total > 0.0)) {
    row.assign(n, 0.0);
    row[0] = 1.0;
    return row;
  }
  for (double& x : row) x /= total;
  return row;
}

DiscreteDistribution random_reward(int H, Rng& rng) {
  const std::size_t count = 1 + rng.below(3);
  const double cap = 1.0 / H;
  std::vector<double> support;
  for (std::size_t j = 0; j < count; ++j) support.push_back(rng.uniform() * cap);
  // Occasionally a zero reward, which the prophet-style instances also have.
  if (rng.uniform() < 0.2) support[0] = 0.0;
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  DiscreteDistribution d;
  d.support = support;
  d.probs = random_row(support.size(), rng);
  // Drop zero-probability points from one-hot rows to keep supports minimal.
  for (std::size_t j = d.size(); j-- > 0;) {
    if (d.probs[j] == 0.0 && d.size() > 1) {
      d.support.erase(d.support.begin() + static_cast<std::ptrdiff_t>(j));
      d.probs.erase(d.probs.begin() + static_cast<std::ptrdiff_t>(j));
    }
  }
  return d;
}

}  // namespace

LayeredMdp random_generic(int H, int k, int A, Rng& rng, bool ordered) {
  if (H < 1 || k < 1 || A < 1) throw std::invalid_argument("random_generic: H, k and A must be positive");
  if (ordered && k > H) throw std::invalid_argument("random_generic: ordered instances need k <= H");
  LayeredMdpData data;
  data.shape = {H, k, A};
  data.start_level = ordered ? k - 1 : static_cast<int>(rng.below(static_cast<std::size_t>(k)));
  data.models.resize(data.shape.num_state_actions());
  std::vector<ActionOrder> ordering;
  auto at = [&](int level, int stage, Action a) -> StateActionModel& {
    return data.models[(static_cast<std::size_t>(stage) * k + level) * A + a];
  };
  for (int stage = 0; stage < H; ++stage) {
    const bool last = stage + 1 == H;
    for (int level = 0; level < k; ++level) {
      for (Action a = 0; a < A; ++a) at(level, stage, a).reward = random_reward(H, rng);
      if (!ordered) {
        if (!last)
          for (Action a = 0; a < A; ++a) at(level, stage, a).transition = random_row(static_cast<std::size_t>(k), rng);
        continue;
      }
      ActionOrder order(static_cast<std::size_t>(A));
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t j = order.size(); j > 1; --j) std::swap(order[j - 1], order[rng.below(j)]);
      ordering.push_back(order);
      if (last) continue;
      std::vector<double> stay(static_cast<std::size_t>(A));
      for (double& s : stay) {
        const double u = rng.uniform();
        s = u < 0.1 ? 0.0 : (u < 0.2 ? 1.0 : rng.uniform());
      }
      std::sort(stay.begin(), stay.end());
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const Action a = order[pos];
        std::vector<double> row(static_cast<std::size_t>(k), 0.0);
        if (level == 0) {
          row[0] = 1.0;
        } else {
          const std::vector<double> lower = random_row(static_cast<std::size_t>(level), rng);
          row[static_cast<std::size_t>(level)] = stay[pos];
          for (int s = 0; s < level; ++s) row[static_cast<std::size_t>(s)] = (1.0 - stay[pos]) * lower[static_cast<std::size_t>(s)];
        }
        at(level, stage, a).transition = std::move(row);
      }
    }
  }
  if (ordered) data.ordering = std::move(ordering);
  return LayeredMdp(std::move(data));
}

}  // namespace bfmdp
