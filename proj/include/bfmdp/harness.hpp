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

// Experiment grids over (instance, algorithm, seed) cells with exact expected
// regret accounting, CSV and SVG output.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bfmdp/instances.hpp"
#include "bfmdp/learners.hpp"
#include "bfmdp/mdp.hpp"

namespace bfmdp {

enum class Algorithm { ExpRef, OrderedExpRef, UcbVi };

std::string_view to_string(Algorithm algorithm);  // expref, ordered, ucbvi
Algorithm parse_algorithm(std::string_view text);
FeedbackMode feedback_for(Algorithm algorithm);

// ---------------------------------------------------------------------------
// Configuration

struct ExperimentConfig {
  // "I1" (uniform prophet), "I2" (random prophet) or a path to an instance
  // or application spec file.
  std::string instance = "I1";
  std::vector<int> H{15};
  std::vector<int> k{2, 3, 4};
  int A = 5;
  std::uint64_t instance_seed = 1;  // I2 only
  bool reject_action = true;        // I1/I2: keep the reject-all action
  std::vector<Algorithm> algorithms{Algorithm::ExpRef, Algorithm::OrderedExpRef, Algorithm::UcbVi};
  std::int64_t T = 100000;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string out = "results";
  bool normalize_by_k = false;
  std::int64_t stride = 0;  // 0 selects max(1, T / 10^4)
  double delta = 0.1;       // UCB-VI confidence
  int jobs = 1;

  std::int64_t effective_stride() const;
  // Throws std::invalid_argument naming the offending field.
  void check() const;
};

// Reads the config keys present in `doc` over `config`. Keys use the flag
// names with '_' or '-': instance, H, k, A, instance_seed, reject_action,
// algo, T, seeds, out, normalize_by_k, stride, delta, jobs.
void apply_config_json(ExperimentConfig& config, const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

// "5" means seeds 1..5, "3,7,9" a list and "10-19" an inclusive range.
std::vector<std::uint64_t> parse_seeds(std::string_view text);
// Comma-separated integers.
std::vector<int> parse_int_list(std::string_view text);

// ---------------------------------------------------------------------------
// Instances

struct ExperimentInstance {
  std::string label;  // panel name, e.g. I1_H15_k2_A5
  std::shared_ptr<const LayeredMdp> mdp;
  double value_scale = 1.0;
  int capacity = 1;  // k used when normalizing regret
};

// Every panel of the config: the (H, k) grid for I1 and I2, a single panel
// for a file.
std::vector<ExperimentInstance> build_instances(const ExperimentConfig& config);

// Multiplier from regret in the compiled instance's reward units to the
// reported units: undoes value_scale, then divides by capacity when
// normalizing.
double report_factor(const ExperimentInstance& instance, bool normalize_by_k);

// ---------------------------------------------------------------------------
// Regret traces

struct TraceRow {
  std::int64_t episode = 0;
  double instant_regret = 0.0;
  double cum_regret = 0.0;
  double wall_s = 0.0;
  bool operator==(const TraceRow&) const = default;
};

struct RegretTrace {
  std::string instance;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::vector<TraceRow> rows;
  double optimal_value = 0.0;       // in instance reward units
  double learner_seconds = 0.0;     // learner loop only
  std::int64_t episodes = 0;
  std::size_t distinct_policies = 0;

  double final_regret() const { return rows.empty() ? 0.0 : rows.back().cum_regret; }
  // Cumulative regret at a recorded episode; throws if not recorded.
  double cum_at(std::int64_t episode) const;
};

// Turns a learner run into a trace sampled at multiples of `stride` and at
// the final episode. Values are multiplied by `factor`.
RegretTrace regret_trace(const LayeredMdp& mdp, const LearnerRun& run, std::int64_t stride, double factor = 1.0);

struct CellSpec {
  ExperimentInstance instance;
  Algorithm algorithm = Algorithm::ExpRef;
  std::uint64_t seed = 1;
  std::int64_t T = 1;
  std::int64_t stride = 1;
  bool normalize_by_k = false;
  double delta = 0.1;
};

// Runs one learner for exactly T episodes. The environment draws from
// Rng::derive(seed, 0) and the learner from Rng::derive(seed, 1).
RegretTrace run_cell(const CellSpec& cell);

struct CellFailure {
  std::string instance;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::string error;
};

struct PanelSummary {
  std::string instance;
  std::string algorithm;
  std::vector<std::int64_t> episodes;
  std::vector<double> mean, min, max;
  double mean_learner_seconds = 0.0;
  double min_learner_seconds = 0.0;
  std::size_t seeds = 0;
};

struct GridResult {
  std::vector<RegretTrace> traces;
  std::vector<CellFailure> failures;
  std::vector<PanelSummary> summaries;
  bool ok() const { return failures.empty(); }
};

// Aggregates traces of the same (instance, algorithm) across seeds. Traces
// must share their recorded episodes.
std::vector<PanelSummary> summarize(const std::vector<RegretTrace>& traces);

// Runs every cell, writing outputs under config.out unless `write` is false.
// Failed cells are reported and the rest of the grid continues.
GridResult run_grid(const ExperimentConfig& config, bool write = true);

// ---------------------------------------------------------------------------
// Output

// Columns episode,instant_regret,cum_regret,algorithm,seed,wall_s.
std::string trace_to_csv(const RegretTrace& trace);
// Parses trace_to_csv output (algorithm and seed taken from the rows).
RegretTrace trace_from_csv(std::string_view text);
void emit_csv(const RegretTrace& trace, const std::filesystem::path& path);

std::string summaries_to_csv(const std::vector<PanelSummary>& summaries);
std::vector<PanelSummary> summaries_from_csv(std::string_view text);

// Line chart of the mean cumulative regret with a min..max band per
// algorithm, one panel.
std::string render_svg(const std::vector<PanelSummary>& panel, const std::string& title, const std::string& y_label);
void emit_svg(const std::vector<PanelSummary>& panel, const std::string& title, const std::string& y_label,
              const std::filesystem::path& path);

// Learner wall time per algorithm (rows) and panel (columns), as Markdown
// and CSV.
std::string runtime_markdown(const std::vector<PanelSummary>& summaries);
std::string runtime_csv(const std::vector<PanelSummary>& summaries);

// Shortest round-trip decimal form, independent of the locale.
std::string format_double(double value);

}  // namespace bfmdp
