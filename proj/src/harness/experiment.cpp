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

#include <atomic>
#include <mutex>
#include <optional>
#include <thread>

#include "bfmdp/harness.hpp"
#include "bfmdp/kernels.hpp"
#include "bfmdp/serialization.hpp"

namespace bfmdp {

namespace {

std::string cell_file_name(const std::string& instance, const std::string& algorithm, std::uint64_t seed) {
  return instance + "_" + algorithm + "_seed" + std::to_string(seed) + ".csv";
}

}  // namespace

GridResult run_grid(const ExperimentConfig& config, bool write) {
  config.check();
  const std::vector<ExperimentInstance> instances = build_instances(config);
  const std::int64_t stride = config.effective_stride();

  std::vector<CellSpec> cells;
  for (const ExperimentInstance& instance : instances)
    for (Algorithm algorithm : config.algorithms)
      for (std::uint64_t seed : config.seeds)
        cells.push_back({instance, algorithm, seed, config.T, stride, config.normalize_by_k, config.delta});

  std::vector<std::optional<RegretTrace>> traces(cells.size());
  std::vector<std::string> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        traces[i] = run_cell(cells[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::min<int>(config.jobs, static_cast<int>(std::max<std::size_t>(cells.size(), 1)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  GridResult result;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (traces[i]) {
      result.traces.push_back(std::move(*traces[i]));
    } else {
      result.failures.push_back(
          {cells[i].instance.label, std::string(to_string(cells[i].algorithm)), cells[i].seed, errors[i]});
    }
  }
  result.summaries = summarize(result.traces);
  if (!write) return result;

  const std::filesystem::path out(config.out);
  for (const RegretTrace& trace : result.traces)
    emit_csv(trace, out / "cells" / cell_file_name(trace.instance, trace.algorithm, trace.seed));
  write_text_file(out / "aggregate.csv", summaries_to_csv(result.summaries));
  const std::string y_label = config.normalize_by_k ? "cumulative regret / k" : "cumulative regret";
  for (const ExperimentInstance& instance : instances) {
    std::vector<PanelSummary> panel;
    for (const PanelSummary& s : result.summaries)
      if (s.instance == instance.label) panel.push_back(s);
    if (!panel.empty()) emit_svg(panel, instance.label, y_label, out / (instance.label + ".svg"));
  }
  write_text_file(out / "runtime.md", runtime_markdown(result.summaries));
  write_text_file(out / "runtime.csv", runtime_csv(result.summaries));

  nlohmann::json failures = nlohmann::json::array();
  for (const CellFailure& f : result.failures)
    failures.push_back({{"instance", f.instance}, {"algorithm", f.algorithm}, {"seed", f.seed}, {"error", f.error}});
  nlohmann::json meta = {{"config", config_to_json(config)},
                         {"seeds_per_curve", config.seeds.size()},
                         {"kernels", std::string(kernels::name(kernels::active().target))},
                         {"rng", "mt19937_64; environment stream derive(seed, 0), learner stream derive(seed, 1)"},
                         {"cells", cells.size()},
                         {"failures", failures}};
  write_text_file(out / "metadata.json", meta.dump(2) + "\n");
  return result;
}

}  // namespace bfmdp
