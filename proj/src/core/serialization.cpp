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

#include "bfmdp/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bfmdp {

using nlohmann::json;

json mdp_to_json(const LayeredMdp& mdp) {
  const MdpShape& s = mdp.shape();
  json doc;
  doc["format"] = "layered-mdp";
  doc["version"] = kMdpSchemaVersion;
  doc["H"] = s.horizon;
  doc["k"] = s.width;
  doc["A"] = s.num_actions;
  doc["start_level"] = mdp.start_level();
  json rewards = json::array();
  json kernel = json::array();
  for (int stage = 0; stage < s.horizon; ++stage) {
    json reward_stage = json::array();
    json kernel_stage = json::array();
    for (int level = 0; level < s.width; ++level) {
      json reward_level = json::array();
      json kernel_level = json::array();
      for (Action a = 0; a < s.num_actions; ++a) {
        const StateActionModel& m = mdp.model(level, stage, a);
        json r = {{"support", m.reward.support}, {"probs", m.reward.probs}};
        if (m.coupled()) r["transition_given_reward"] = m.transition_given_reward;
        reward_level.push_back(std::move(r));
        kernel_level.push_back(m.transition);
      }
      reward_stage.push_back(std::move(reward_level));
      kernel_stage.push_back(std::move(kernel_level));
    }
    rewards.push_back(std::move(reward_stage));
    if (stage + 1 < s.horizon) kernel.push_back(std::move(kernel_stage));
  }
  doc["rewards"] = std::move(rewards);
  doc["kernel"] = std::move(kernel);
  if (mdp.ordered()) {
    json ordering = json::array();
    for (int stage = 0; stage < s.horizon; ++stage) {
      json row = json::array();
      for (int level = 0; level < s.width; ++level) row.push_back(mdp.order(level, stage));
      ordering.push_back(std::move(row));
    }
    doc["ordering"] = std::move(ordering);
  }
  return doc;
}

namespace {

const json& member(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw std::invalid_argument(std::string("instance file: missing field '") + key + "'");
  return *it;
}

const json& at(const json& array, int index, const char* what) {
  if (!array.is_array() || index >= static_cast<int>(array.size()))
    throw std::invalid_argument(std::string("instance file: '") + what + "' has the wrong dimensions");
  return array[static_cast<std::size_t>(index)];
}

}  // namespace

LayeredMdp mdp_from_json(const json& doc) {
  if (member(doc, "format").get<std::string>() != "layered-mdp")
    throw std::invalid_argument("instance file: format is not 'layered-mdp'");
  const int version = member(doc, "version").get<int>();
  if (version != kMdpSchemaVersion)
    throw std::invalid_argument("instance file: unsupported version " + std::to_string(version));
  LayeredMdpData data;
  data.shape.horizon = member(doc, "H").get<int>();
  data.shape.width = member(doc, "k").get<int>();
  data.shape.num_actions = member(doc, "A").get<int>();
  data.start_level = member(doc, "start_level").get<int>();
  const MdpShape& s = data.shape;
  if (s.horizon < 1 || s.width < 1 || s.num_actions < 1)
    throw std::invalid_argument("instance file: H, k and A must be positive");
  const json& rewards = member(doc, "rewards");
  const json& kernel = member(doc, "kernel");
  if (!kernel.is_array() || kernel.size() != static_cast<std::size_t>(s.horizon - 1))
    throw std::invalid_argument("instance file: 'kernel' must have H-1 stages");
  data.models.resize(s.num_state_actions());
  for (int stage = 0; stage < s.horizon; ++stage) {
    for (int level = 0; level < s.width; ++level) {
      for (Action a = 0; a < s.num_actions; ++a) {
        StateActionModel& m = data.models[(static_cast<std::size_t>(stage) * s.width + level) * s.num_actions + a];
        const json& r = at(at(at(rewards, stage, "rewards"), level, "rewards"), a, "rewards");
        m.reward.support = member(r, "support").get<std::vector<double>>();
        m.reward.probs = member(r, "probs").get<std::vector<double>>();
        if (auto it = r.find("transition_given_reward"); it != r.end())
          m.transition_given_reward = it->get<std::vector<std::vector<double>>>();
        if (stage + 1 < s.horizon)
          m.transition = at(at(at(kernel, stage, "kernel"), level, "kernel"), a, "kernel").get<std::vector<double>>();
      }
    }
  }
  if (auto it = doc.find("ordering"); it != doc.end() && !it->is_null()) {
    std::vector<ActionOrder> ordering;
    ordering.reserve(s.num_states());
    for (int stage = 0; stage < s.horizon; ++stage)
      for (int level = 0; level < s.width; ++level)
        ordering.push_back(at(at(*it, stage, "ordering"), level, "ordering").get<ActionOrder>());
    data.ordering = std::move(ordering);
  }
  return LayeredMdp(std::move(data));
}

std::string write_mdp(const LayeredMdp& mdp) { return mdp_to_json(mdp).dump(1) + "\n"; }

LayeredMdp read_mdp(const std::string& text) { return mdp_from_json(json::parse(text)); }

void save_mdp(const LayeredMdp& mdp, const std::filesystem::path& path) { write_text_file(path, write_mdp(mdp)); }

LayeredMdp load_mdp(const std::filesystem::path& path) {
  try {
    return read_mdp(read_text_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace bfmdp
