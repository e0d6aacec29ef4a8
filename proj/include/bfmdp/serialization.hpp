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

#pragma once

// Versioned JSON schema for LayeredMdp instances.
//
//   {"format": "layered-mdp", "version": 1, "H": .., "k": .., "A": ..,
//    "start_level": ..,
//    "rewards": [stage][level][action] -> {"support": [...], "probs": [...],
//                                          "transition_given_reward": [[...]]?},
//    "kernel": [stage][level][action] -> [p(next = 0), ..., p(next = k-1)],
//    "ordering": [stage][level] -> [least, ..., greatest]?}
//
// "kernel" has H-1 stages. Doubles are written in shortest round-trip form,
// so write followed by read reproduces the instance bit for bit.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "bfmdp/mdp.hpp"

namespace bfmdp {

inline constexpr int kMdpSchemaVersion = 1;

nlohmann::json mdp_to_json(const LayeredMdp& mdp);
LayeredMdp mdp_from_json(const nlohmann::json& doc);

std::string write_mdp(const LayeredMdp& mdp);
LayeredMdp read_mdp(const std::string& text);

void save_mdp(const LayeredMdp& mdp, const std::filesystem::path& path);
LayeredMdp load_mdp(const std::filesystem::path& path);

// Shared file helpers; errors name the path.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace bfmdp
