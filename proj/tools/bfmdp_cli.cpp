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

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfmdp/dynamic_programming.hpp"
#include "bfmdp/harness.hpp"
#include "bfmdp/instances.hpp"
#include "bfmdp/kernels.hpp"
#include "bfmdp/serialization.hpp"
#include "bfmdp/simulate.hpp"

namespace {

using namespace bfmdp;
using nlohmann::json;

void output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_file(path, text);
}

struct MakeInstanceArgs {
  std::string family = "I1";
  int H = 15, k = 2, A = 5;
  std::uint64_t seed = 1;
  std::int64_t T = 100000;
  double epsilon = 0.0;
  bool compiled = false;
  bool ordered = false;
  bool no_reject = false;
  std::string out;
};

int make_instance(const MakeInstanceArgs& a) {
  json doc;
  Rng rng(a.seed);
  if (a.family == "I1" || a.family == "I2" || a.family == "pricing") {
    ProphetSpec spec = a.family == "I2" ? prophet_random(a.H, a.k, a.A, rng) : prophet_uniform(a.H, a.k, a.A);
    if (a.family == "pricing") spec.problem = ProphetProblem::Pricing;
    spec.reject_action = !a.no_reject;
    if (a.compiled) {
      doc = mdp_to_json(compile(spec));
      doc["value_scale"] = spec.value_scale;
    } else {
      doc = prophet_spec_to_json(spec);
    }
  } else if (a.family == "hard-general") {
    HardInstanceGeneralSpec spec;
    spec.A = a.A;
    for (int i = 0; i < a.H; ++i) spec.theta.push_back(static_cast<Action>(rng.below(static_cast<std::size_t>(a.A))));
    spec.epsilon = a.epsilon > 0.0 ? a.epsilon : default_hard_epsilon(hard_general_family_size(a.H, a.A), a.T);
    doc = mdp_to_json(hard_instance_general(spec));
  } else if (a.family == "hard-ordered") {
    const double eps = a.epsilon > 0.0 ? a.epsilon : default_hard_epsilon(hard_ordered_family_size(a.H, a.k, a.A), a.T);
    const auto specs = enumerate_hard_ordered(a.H, a.k, a.A, eps);
    if (specs.empty()) throw std::invalid_argument("hard-ordered: requires k <= H - 1");
    doc = mdp_to_json(hard_instance_ordered(specs[rng.below(specs.size())], a.H, a.A));
  } else if (a.family == "random") {
    doc = mdp_to_json(random_generic(a.H, a.k, a.A, rng, a.ordered));
  } else {
    throw std::invalid_argument("unknown family '" + a.family + "'");
  }
  output(doc.dump(1) + "\n", a.out);
  return 0;
}

struct EvalArgs {
  std::string instance;
  std::string policy;
  std::string policy_file;
  std::int64_t episodes = 0;
  std::uint64_t seed = 1;
  std::string out;
};

int eval_policy(const EvalArgs& a) {
  const LoadedInstance loaded = load_instance(a.instance);
  const LayeredMdp& mdp = loaded.mdp;
  const ValidationReport report = validate(mdp);
  if (!report.ok()) throw std::invalid_argument("instance does not validate:\n" + report.summary());
  const OptimalSolution opt = optimal_policy(mdp);
  json doc = {{"optimal_value", opt.value}, {"optimal_policy", opt.policy.to_string()}, {"value_scale", loaded.value_scale}};
  std::string text = a.policy;
  if (!a.policy_file.empty()) text = read_text_file(a.policy_file);
  if (!text.empty()) {
    const Policy policy = Policy::parse(text);
    if (!policy.well_formed(mdp.shape())) throw std::invalid_argument("policy does not fit the instance");
    const double value = policy_value(mdp, policy);
    doc["policy"] = policy.to_string();
    doc["value"] = value;
    doc["gap"] = opt.value - value;
    if (a.episodes > 0) {
      Rng rng(a.seed);
      double sum = 0.0, sq = 0.0;
      for (std::int64_t e = 0; e < a.episodes; ++e) {
        const double r = simulate_aggregate(mdp, policy, rng);
        sum += r;
        sq += r * r;
      }
      const double n = static_cast<double>(a.episodes);
      const double mean = sum / n;
      doc["monte_carlo"] = {{"episodes", a.episodes},
                            {"mean", mean},
                            {"standard_error", std::sqrt(std::max(0.0, sq / n - mean * mean) / n)}};
    }
  }
  output(doc.dump(2) + "\n", a.out);
  return 0;
}

int render(const std::string& in, std::string out, bool normalized) {
  if (out.empty()) out = in;
  const auto summaries = summaries_from_csv(read_text_file(std::filesystem::path(in) / "aggregate.csv"));
  std::vector<std::string> panels;
  for (const auto& s : summaries)
    if (std::find(panels.begin(), panels.end(), s.instance) == panels.end()) panels.push_back(s.instance);
  for (const auto& name : panels) {
    std::vector<PanelSummary> panel;
    for (const auto& s : summaries)
      if (s.instance == name) panel.push_back(s);
    const auto path = std::filesystem::path(out) / (name + ".svg");
    emit_svg(panel, name, normalized ? "cumulative regret / k" : "cumulative regret", path);
    std::cout << path.string() << "\n";
  }
  write_text_file(std::filesystem::path(out) / "runtime.md", runtime_markdown(summaries));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered episodic MDPs with bandit feedback: instances, learners and regret experiments"};
  app.require_subcommand(1);
  std::string kernel_target;
  app.add_option("--kernels", kernel_target, "Force the kernel target (scalar or avx2)");

  MakeInstanceArgs make;
  auto* make_cmd = app.add_subcommand("make-instance", "Write an instance or application spec as JSON");
  make_cmd->add_option("--family", make.family, "I1, I2, pricing, hard-general, hard-ordered or random")
      ->capture_default_str();
  make_cmd->add_option("--H", make.H, "Stages")->capture_default_str();
  make_cmd->add_option("--k", make.k, "Width or capacity")->capture_default_str();
  make_cmd->add_option("--A", make.A, "Support size or actions")->capture_default_str();
  make_cmd->add_option("--seed", make.seed, "Generator seed")->capture_default_str();
  make_cmd->add_option("--T", make.T, "Horizon used for the default hard-instance epsilon")->capture_default_str();
  make_cmd->add_option("--epsilon", make.epsilon, "Hard-instance gap (default min(sqrt(L/T), 1)/8)");
  make_cmd->add_flag("--compiled", make.compiled, "Emit the compiled layered MDP instead of the application spec");
  make_cmd->add_flag("--ordered", make.ordered, "Random family: ordered instance");
  make_cmd->add_flag("--no-reject-action", make.no_reject, "Prophet families: drop the reject-all action");
  make_cmd->add_option("--out", make.out, "Output file (default stdout)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval-policy", "Exact value of a policy and of the optimal policy");
  eval_cmd->add_option("--instance", eval.instance, "Instance or spec file")->required();
  eval_cmd->add_option("--policy", eval.policy, "Policy text, rows per level separated by ';'");
  eval_cmd->add_option("--policy-file", eval.policy_file, "File holding the policy text");
  eval_cmd->add_option("--episodes", eval.episodes, "Also estimate the value from this many simulated episodes");
  eval_cmd->add_option("--seed", eval.seed, "Simulation seed")->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Output file (default stdout)");

  std::string config_path, instance, algos, seeds, out, H_list, k_list;
  int A = 0, jobs = 0;
  std::int64_t T = 0, stride = 0;
  double delta = 0.0;
  std::uint64_t instance_seed = 0;
  bool normalize = false, no_reject = false;
  auto* run_cmd = app.add_subcommand("run-experiment", "Run an (instance x algorithm x seed) grid");
  run_cmd->add_option("--config", config_path, "JSON config; flags override its values");
  auto* o_instance = run_cmd->add_option("--instance", instance, "I1, I2 or an instance/spec file");
  auto* o_H = run_cmd->add_option("--H", H_list, "Stages, comma-separated list");
  auto* o_k = run_cmd->add_option("--k", k_list, "Capacities, comma-separated list");
  auto* o_A = run_cmd->add_option("--A", A, "Support size");
  auto* o_algo = run_cmd->add_option("--algo", algos, "Comma-separated subset of expref,ordered,ucbvi");
  auto* o_T = run_cmd->add_option("--T", T, "Episodes per cell");
  auto* o_seeds = run_cmd->add_option("--seeds", seeds, "N (seeds 1..N), a list 3,7,9 or a range 10-19");
  auto* o_out = run_cmd->add_option("--out", out, "Output directory");
  auto* o_norm = run_cmd->add_flag("--normalize-by-k", normalize, "Report cumulative regret divided by k");
  auto* o_stride = run_cmd->add_option("--stride", stride, "Record every m-th episode");
  auto* o_delta = run_cmd->add_option("--delta", delta, "UCB-VI confidence");
  auto* o_jobs = run_cmd->add_option("--jobs", jobs, "Cells run concurrently");
  auto* o_iseed = run_cmd->add_option("--instance-seed", instance_seed, "Seed of the I2 instances");
  auto* o_noreject = run_cmd->add_flag("--no-reject-action", no_reject, "I1/I2: drop the reject-all action");

  std::string render_in, render_out;
  bool render_norm = false;
  auto* render_cmd = app.add_subcommand("render", "Redraw SVG panels from an experiment's aggregate.csv");
  render_cmd->add_option("--in", render_in, "Experiment output directory")->required();
  render_cmd->add_option("--out", render_out, "Directory for the SVG files (default: --in)");
  render_cmd->add_flag("--normalize-by-k", render_norm, "Label the axis as normalized regret");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!kernel_target.empty()) kernels::select(kernels::parse_target(kernel_target));
    if (*make_cmd) return make_instance(make);
    if (*eval_cmd) return eval_policy(eval);
    if (*render_cmd) return render(render_in, render_out, render_norm);

    ExperimentConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    if (*o_instance) config.instance = instance;
    if (*o_H) config.H = parse_int_list(H_list);
    if (*o_k) config.k = parse_int_list(k_list);
    if (*o_A) config.A = A;
    if (*o_algo) {
      config.algorithms.clear();
      std::stringstream list(algos);
      for (std::string name; std::getline(list, name, ',');) config.algorithms.push_back(parse_algorithm(name));
    }
    if (*o_T) config.T = T;
    if (*o_seeds) config.seeds = parse_seeds(seeds);
    if (*o_out) config.out = out;
    if (*o_norm) config.normalize_by_k = normalize;
    if (*o_stride) config.stride = stride;
    if (*o_delta) config.delta = delta;
    if (*o_jobs) config.jobs = jobs;
    if (*o_iseed) config.instance_seed = instance_seed;
    if (*o_noreject) config.reject_action = !no_reject;

    const GridResult result = run_grid(config);
    std::cout << runtime_markdown(result.summaries);
    for (const PanelSummary& s : result.summaries)
      std::cout << s.instance << " " << s.algorithm << " final mean cumulative regret " << s.mean.back() << "\n";
    for (const CellFailure& f : result.failures)
      std::cerr << "cell failed: " << f.instance << " " << f.algorithm << " seed " << f.seed << ": " << f.error << "\n";
    std::cout << "outputs written to " << config.out << "\n";
    return result.ok() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
