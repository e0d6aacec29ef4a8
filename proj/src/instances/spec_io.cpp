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

#include <stdexcept>

#include "bfmdp/instances.hpp"
#include "bfmdp/serialization.hpp"

namespace bfmdp {

using nlohmann::json;

namespace {

constexpr int kSpecVersion = 1;

void check_header(const json& doc, const char* format) {
  if (doc.value("format", std::string()) != format)
    throw std::invalid_argument(std::string("spec file: format is not '") + format + "'");
  if (doc.value("version", 0) != kSpecVersion)
    throw std::invalid_argument("spec file: unsupported version");
}

}  // namespace

json prophet_spec_to_json(const ProphetSpec& spec) {
  json stages = json::array();
  for (const DiscreteDistribution& x : spec.values) stages.push_back({{"support", x.support}, {"probs", x.probs}});
  return {{"format", "prophet-spec"},
          {"version", kSpecVersion},
          {"problem", spec.problem == ProphetProblem::Pricing ? "pricing" : "prophet"},
          {"H", spec.H},
          {"k", spec.k},
          {"A", spec.A},
          {"value_scale", spec.value_scale},
          {"reject_action", spec.reject_action},
          {"stages", std::move(stages)}};
}

ProphetSpec prophet_spec_from_json(const json& doc) {
  check_header(doc, "prophet-spec");
  ProphetSpec spec;
  const std::string problem = doc.value("problem", std::string("prophet"));
  if (problem == "pricing")
    spec.problem = ProphetProblem::Pricing;
  else if (problem != "prophet")
    throw std::invalid_argument("prophet spec: problem must be 'prophet' or 'pricing'");
  spec.H = doc.at("H").get<int>();
  spec.k = doc.at("k").get<int>();
  spec.A = doc.at("A").get<int>();
  spec.value_scale = doc.value("value_scale", spec.k > 0 ? 1.0 / spec.k : 1.0);
  spec.reject_action = doc.value("reject_action", true);
  for (const json& stage : doc.at("stages")) {
    DiscreteDistribution x;
    x.support = stage.at("support").get<std::vector<double>>();
    x.probs = stage.at("probs").get<std::vector<double>>();
    spec.values.push_back(std::move(x));
  }
  return spec;
}

json knapsack_spec_to_json(const KnapsackSpec& spec) {
  json items = json::array();
  for (const auto& item : spec.items) {
    json outcomes = json::array();
    for (const KnapsackOutcome& o : item) outcomes.push_back({{"reward", o.reward}, {"cost", o.cost}, {"prob", o.prob}});
    items.push_back(std::move(outcomes));
  }
  json doc = {{"format", "knapsack-spec"}, {"version", kSpecVersion}, {"budget", spec.budget}, {"items", std::move(items)}};
  if (spec.value_scale) doc["value_scale"] = *spec.value_scale;
  return doc;
}

KnapsackSpec knapsack_spec_from_json(const json& doc) {
  check_header(doc, "knapsack-spec");
  KnapsackSpec spec;
  spec.budget = doc.at("budget").get<int>();
  for (const json& item : doc.at("items")) {
    std::vector<KnapsackOutcome> outcomes;
    for (const json& o : item)
      outcomes.push_back({o.at("reward").get<double>(), o.at("cost").get<double>(), o.at("prob").get<double>()});
    spec.items.push_back(std::move(outcomes));
  }
  if (auto it = doc.find("value_scale"); it != doc.end()) spec.value_scale = it->get<double>();
  return spec;
}

LoadedInstance instance_from_json(const json& doc) {
  const std::string format = doc.value("format", std::string());
  if (format == "layered-mdp") return {mdp_from_json(doc), doc.value("value_scale", 1.0), format};
  if (format == "prophet-spec") {
    ProphetSpec spec = prophet_spec_from_json(doc);
    return {compile(spec), spec.value_scale, format};
  }
  if (format == "knapsack-spec") {
    KnapsackSpec spec = knapsack_spec_from_json(doc);
    const double scale = knapsack_value_scale(spec);
    return {compile_knapsack(spec), scale, format};
  }
  throw std::invalid_argument("unknown instance format '" + format + "'");
}

LoadedInstance load_instance(const std::filesystem::path& path) {
  try {
    return instance_from_json(json::parse(read_text_file(path)));
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace bfmdp
