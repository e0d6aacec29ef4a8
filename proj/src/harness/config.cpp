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
#include <charconv>
#include <set>
#include <stdexcept>
#include <string>

#include "bfmdp/harness.hpp"
#include "bfmdp/serialization.hpp"

namespace bfmdp {

using nlohmann::json;

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::ExpRef: return "expref";
    case Algorithm::OrderedExpRef: return "ordered";
    case Algorithm::UcbVi: return "ucbvi";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "expref") return Algorithm::ExpRef;
  if (text == "ordered") return Algorithm::OrderedExpRef;
  if (text == "ucbvi") return Algorithm::UcbVi;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "' (expected expref, ordered or ucbvi)");
}

FeedbackMode feedback_for(Algorithm algorithm) {
  return algorithm == Algorithm::UcbVi ? FeedbackMode::SemiBandit : FeedbackMode::Bandit;
}

std::int64_t ExperimentConfig::effective_stride() const {
  return stride > 0 ? stride : std::max<std::int64_t>(1, T / 10000);
}

void ExperimentConfig::check() const {
  if (T < 2) throw std::invalid_argument("config: T must be at least 2");
  if (stride < 0) throw std::invalid_argument("config: stride must be at least 1");
  if (seeds.empty()) throw std::invalid_argument("config: no seeds");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    throw std::invalid_argument("config: seeds must be distinct");
  if (algorithms.empty()) throw std::invalid_argument("config: no algorithms");
  if (jobs < 1) throw std::invalid_argument("config: jobs must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("config: delta must lie in (0, 1)");
  if (instance == "I1" || instance == "I2") {
    if (H.empty() || k.empty()) throw std::invalid_argument("config: H and k need at least one value");
    for (int h : H)
      for (int kk : k)
        if (h < 1 || kk < 1 || kk > h) throw std::invalid_argument("config: requires 1 <= k <= H");
    if (A < (instance == "I1" ? 2 : 1)) throw std::invalid_argument("config: A too small for " + instance);
  }
}

namespace {

template <typename T>
T parse_number(std::string_view text, const char* what) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument(std::string("cannot parse ") + what + " from '" + std::string(text) + "'");
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

const json* find_key(const json& doc, const std::string& name) {
  if (auto it = doc.find(name); it != doc.end()) return &*it;
  std::string dashed = name;
  std::replace(dashed.begin(), dashed.end(), '_', '-');
  if (auto it = doc.find(dashed); it != doc.end()) return &*it;
  return nullptr;
}

std::vector<int> int_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<int>>();
  if (v.is_string()) return parse_int_list(v.get<std::string>());
  return {v.get<int>()};
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (std::string_view part : split(text, ',')) out.push_back(parse_number<int>(part, "integer"));
  return out;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty seed list");
  std::vector<std::uint64_t> seeds;
  if (text.find(',') != std::string_view::npos) {
    for (std::string_view part : split(text, ',')) seeds.push_back(parse_number<std::uint64_t>(part, "seed"));
    return seeds;
  }
  if (const std::size_t dash = text.find('-'); dash != std::string_view::npos) {
    const auto first = parse_number<std::uint64_t>(trim(text.substr(0, dash)), "seed");
    const auto last = parse_number<std::uint64_t>(trim(text.substr(dash + 1)), "seed");
    if (last < first) throw std::invalid_argument("seed range '" + std::string(text) + "' is empty");
    for (std::uint64_t s = first; s <= last; ++s) seeds.push_back(s);
    return seeds;
  }
  const auto count = parse_number<std::uint64_t>(text, "seed count");
  for (std::uint64_t s = 1; s <= count; ++s) seeds.push_back(s);
  return seeds;
}

void apply_config_json(ExperimentConfig& config, const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
  static const std::set<std::string> known{"instance", "H", "k", "A", "instance_seed", "reject_action", "algo", "T", "seeds",
                                           "out", "normalize_by_k", "stride", "delta", "jobs"};
  for (const auto& [key, value] : doc.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '-', '_');
    if (!known.count(name)) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  try {
    if (auto v = find_key(doc, "instance")) config.instance = v->get<std::string>();
    if (auto v = find_key(doc, "H")) config.H = int_list(*v);
    if (auto v = find_key(doc, "k")) config.k = int_list(*v);
    if (auto v = find_key(doc, "A")) config.A = v->get<int>();
    if (auto v = find_key(doc, "instance_seed")) config.instance_seed = v->get<std::uint64_t>();
    if (auto v = find_key(doc, "reject_action")) config.reject_action = v->get<bool>();
    if (auto v = find_key(doc, "algo")) {
      config.algorithms.clear();
      if (v->is_array()) {
        for (const json& a : *v) config.algorithms.push_back(parse_algorithm(a.get<std::string>()));
      } else {
        for (std::string_view a : split(v->get<std::string>(), ',')) config.algorithms.push_back(parse_algorithm(a));
      }
    }
    if (auto v = find_key(doc, "T")) config.T = v->get<std::int64_t>();
    if (auto v = find_key(doc, "seeds")) {
      if (v->is_array())
        config.seeds = v->get<std::vector<std::uint64_t>>();
      else if (v->is_string())
        config.seeds = parse_seeds(v->get<std::string>());
      else
        config.seeds = parse_seeds(std::to_string(v->get<std::uint64_t>()));
    }
    if (auto v = find_key(doc, "out")) config.out = v->get<std::string>();
    if (auto v = find_key(doc, "normalize_by_k")) config.normalize_by_k = v->get<bool>();
    if (auto v = find_key(doc, "stride")) config.stride = v->get<std::int64_t>();
    if (auto v = find_key(doc, "delta")) config.delta = v->get<double>();
    if (auto v = find_key(doc, "jobs")) config.jobs = v->get<int>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  ExperimentConfig config;
  try {
    apply_config_json(config, json::parse(read_text_file(path)));
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return config;
}

json config_to_json(const ExperimentConfig& config) {
  json algos = json::array();
  for (Algorithm a : config.algorithms) algos.push_back(std::string(to_string(a)));
  return {{"instance", config.instance}, {"H", config.H},         {"k", config.k},
          {"A", config.A},               {"instance_seed", config.instance_seed},
          {"reject_action", config.reject_action},
          {"algo", algos},               {"T", config.T},         {"seeds", config.seeds},
          {"out", config.out},           {"normalize_by_k", config.normalize_by_k},
          {"stride", config.effective_stride()}, {"delta", config.delta}, {"jobs", config.jobs}};
}

std::vector<ExperimentInstance> build_instances(const ExperimentConfig& config) {
  std::vector<ExperimentInstance> out;
  if (config.instance == "I1" || config.instance == "I2") {
    for (int h : config.H) {
      for (int kk : config.k) {
        ProphetSpec spec;
        if (config.instance == "I1") {
          spec = prophet_uniform(h, kk, config.A);
        } else {
          Rng rng(Rng::derive(config.instance_seed, static_cast<std::uint64_t>(h) * 1000 + static_cast<std::uint64_t>(kk)));
          spec = prophet_random(h, kk, config.A, rng);
        }
        spec.reject_action = config.reject_action;
        ExperimentInstance inst;
        inst.label = config.instance + "_H" + std::to_string(h) + "_k" + std::to_string(kk) + "_A" + std::to_string(config.A);
        inst.mdp = std::make_shared<const LayeredMdp>(compile(spec));
        inst.value_scale = spec.value_scale;
        inst.capacity = kk;
        out.push_back(std::move(inst));
      }
    }
    return out;
  }
  const std::filesystem::path path(config.instance);
  LoadedInstance loaded = load_instance(path);
  ExperimentInstance inst;
  inst.label = path.stem().string();
  inst.value_scale = loaded.value_scale;
  if (loaded.kind == "prophet-spec") {
    inst.capacity = loaded.mdp.width() - 1;
  } else if (loaded.kind == "knapsack-spec") {
    inst.capacity = loaded.mdp.width() - 2;
  } else {
    inst.capacity = loaded.mdp.width();
  }
  inst.capacity = std::max(inst.capacity, 1);
  inst.mdp = std::make_shared<const LayeredMdp>(std::move(loaded.mdp));
  out.push_back(std::move(inst));
  return out;
}

double report_factor(const ExperimentInstance& instance, bool normalize_by_k) {
  const double original = 1.0 / instance.value_scale;
  return normalize_by_k ? original / instance.capacity : original;
}

}  // namespace bfmdp
