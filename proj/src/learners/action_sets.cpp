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

#include "bfmdp/learners.hpp"

namespace bfmdp {

ActionSetTable::ActionSetTable(const MdpShape& shape) : shape_(shape) {
  std::vector<Action> all(static_cast<std::size_t>(shape.num_actions));
  std::iota(all.begin(), all.end(), 0);
  sets_.assign(shape.num_states(), all);
}

bool ActionSetTable::contains(int level, int stage, Action action) const {
  const auto& s = at(level, stage);
  return std::binary_search(s.begin(), s.end(), action);
}

void ActionSetTable::set(int level, int stage, std::vector<Action> actions) {
  std::sort(actions.begin(), actions.end());
  actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
  if (actions.empty()) throw std::invalid_argument("ActionSetTable: empty action set");
  if (actions.front() < 0 || actions.back() >= shape_.num_actions)
    throw std::invalid_argument("ActionSetTable: action out of range");
  sets_[offset(level, stage)] = std::move(actions);
}

bool ActionSetTable::all_nonempty() const {
  return std::all_of(sets_.begin(), sets_.end(), [](const auto& s) { return !s.empty(); });
}

bool ActionSetTable::subset_of(const ActionSetTable& other) const {
  if (!(shape_ == other.shape_)) return false;
  for (std::size_t i = 0; i < sets_.size(); ++i)
    if (!std::includes(other.sets_[i].begin(), other.sets_[i].end(), sets_[i].begin(), sets_[i].end())) return false;
  return true;
}

std::size_t ActionSetTable::total_size() const {
  std::size_t total = 0;
  for (const auto& s : sets_) total += s.size();
  return total;
}

}  // namespace bfmdp
