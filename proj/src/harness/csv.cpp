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
#include <locale>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bfmdp/harness.hpp"
#include "bfmdp/serialization.hpp"

namespace bfmdp {

namespace {

constexpr std::string_view kTraceHeader = "episode,instant_regret,cum_regret,algorithm,seed,wall_s";
constexpr std::string_view kSummaryHeader =
    "instance,algorithm,episode,mean_cum_regret,min_cum_regret,max_cum_regret,seeds,mean_learner_s,min_learner_s";

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
    start = end + 1;
  }
  return out;
}

template <typename T>
T parse(std::string_view text, std::size_t line_number) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("csv line " + std::to_string(line_number) + ": bad number '" + std::string(text) + "'");
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, ptr);
}

std::string trace_to_csv(const RegretTrace& trace) {
  std::string out(kTraceHeader);
  out += '\n';
  const std::string tail = "," + trace.algorithm + "," + std::to_string(trace.seed) + ",";
  for (const TraceRow& row : trace.rows) {
    out += std::to_string(row.episode);
    out += ',';
    out += format_double(row.instant_regret);
    out += ',';
    out += format_double(row.cum_regret);
    out += tail;
    out += format_double(row.wall_s);
    out += '\n';
  }
  return out;
}

RegretTrace trace_from_csv(std::string_view text) {
  const auto all = lines(text);
  if (all.empty() || all.front() != kTraceHeader) throw std::invalid_argument("csv: missing or unexpected header");
  RegretTrace trace;
  for (std::size_t i = 1; i < all.size(); ++i) {
    const auto f = fields(all[i]);
    if (f.size() != 6) throw std::invalid_argument("csv line " + std::to_string(i + 1) + ": expected 6 fields");
    TraceRow row;
    row.episode = parse<std::int64_t>(f[0], i + 1);
    row.instant_regret = parse<double>(f[1], i + 1);
    row.cum_regret = parse<double>(f[2], i + 1);
    row.wall_s = parse<double>(f[5], i + 1);
    if (i == 1) {
      trace.algorithm = std::string(f[3]);
      trace.seed = parse<std::uint64_t>(f[4], i + 1);
    }
    trace.rows.push_back(row);
  }
  if (!trace.rows.empty()) trace.episodes = trace.rows.back().episode;
  return trace;
}

void emit_csv(const RegretTrace& trace, const std::filesystem::path& path) {
  if (trace.rows.empty())
    throw std::invalid_argument("emit_csv: trace for " + trace.algorithm + " seed " + std::to_string(trace.seed) +
                                " has no recorded rows (" + path.string() + ")");
  write_text_file(path, trace_to_csv(trace));
}

std::string summaries_to_csv(const std::vector<PanelSummary>& summaries) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const PanelSummary& s : summaries) {
    for (std::size_t j = 0; j < s.episodes.size(); ++j) {
      out += s.instance + "," + s.algorithm + "," + std::to_string(s.episodes[j]) + "," + format_double(s.mean[j]) +
             "," + format_double(s.min[j]) + "," + format_double(s.max[j]) + "," + std::to_string(s.seeds) + "," +
             format_double(s.mean_learner_seconds) + "," + format_double(s.min_learner_seconds) + "\n";
    }
  }
  return out;
}

std::vector<PanelSummary> summaries_from_csv(std::string_view text) {
  const auto all = lines(text);
  if (all.empty() || all.front() != kSummaryHeader) throw std::invalid_argument("csv: missing or unexpected header");
  std::vector<PanelSummary> out;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (std::size_t i = 1; i < all.size(); ++i) {
    const auto f = fields(all[i]);
    if (f.size() != 9) throw std::invalid_argument("csv line " + std::to_string(i + 1) + ": expected 9 fields");
    auto [it, inserted] = index.try_emplace({std::string(f[0]), std::string(f[1])}, out.size());
    if (inserted) {
      PanelSummary s;
      s.instance = std::string(f[0]);
      s.algorithm = std::string(f[1]);
      s.seeds = parse<std::size_t>(f[6], i + 1);
      s.mean_learner_seconds = parse<double>(f[7], i + 1);
      s.min_learner_seconds = parse<double>(f[8], i + 1);
      out.push_back(std::move(s));
    }
    PanelSummary& s = out[it->second];
    s.episodes.push_back(parse<std::int64_t>(f[2], i + 1));
    s.mean.push_back(parse<double>(f[3], i + 1));
    s.min.push_back(parse<double>(f[4], i + 1));
    s.max.push_back(parse<double>(f[5], i + 1));
  }
  return out;
}

namespace {

// Column order of first appearance.
std::vector<std::string> panel_names(const std::vector<PanelSummary>& summaries) {
  std::vector<std::string> names;
  for (const PanelSummary& s : summaries)
    if (std::find(names.begin(), names.end(), s.instance) == names.end()) names.push_back(s.instance);
  return names;
}

std::vector<std::string> algorithm_names(const std::vector<PanelSummary>& summaries) {
  std::vector<std::string> names;
  for (const PanelSummary& s : summaries)
    if (std::find(names.begin(), names.end(), s.algorithm) == names.end()) names.push_back(s.algorithm);
  return names;
}

const PanelSummary* lookup(const std::vector<PanelSummary>& summaries, const std::string& instance,
                           const std::string& algorithm) {
  for (const PanelSummary& s : summaries)
    if (s.instance == instance && s.algorithm == algorithm) return &s;
  return nullptr;
}

std::string fixed(double value, int digits) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << value;
  return out.str();
}

}  // namespace

std::string runtime_markdown(const std::vector<PanelSummary>& summaries) {
  const auto panels = panel_names(summaries);
  const auto algorithms = algorithm_names(summaries);
  std::string out = "Learner wall time in seconds, mean over seeds (microseconds per episode in parentheses).\n\n";
  out += "| algorithm |";
  for (const auto& p : panels) out += " " + p + " |";
  out += "\n|---|";
  for (std::size_t j = 0; j < panels.size(); ++j) out += "---|";
  out += "\n";
  for (const auto& a : algorithms) {
    out += "| " + a + " |";
    for (const auto& p : panels) {
      const PanelSummary* s = lookup(summaries, p, a);
      if (!s || s->episodes.empty()) {
        out += " - |";
        continue;
      }
      const double per_episode = s->mean_learner_seconds / static_cast<double>(s->episodes.back()) * 1e6;
      out += " " + fixed(s->mean_learner_seconds, 3) + " (" + fixed(per_episode, 3) + ") |";
    }
    out += "\n";
  }
  return out;
}

std::string runtime_csv(const std::vector<PanelSummary>& summaries) {
  std::string out = "instance,algorithm,episodes,seeds,mean_learner_s,min_learner_s,mean_us_per_episode\n";
  for (const PanelSummary& s : summaries) {
    if (s.episodes.empty()) continue;
    const double T = static_cast<double>(s.episodes.back());
    out += s.instance + "," + s.algorithm + "," + std::to_string(s.episodes.back()) + "," + std::to_string(s.seeds) +
           "," + format_double(s.mean_learner_seconds) + "," + format_double(s.min_learner_seconds) + "," +
           format_double(s.mean_learner_seconds / T * 1e6) + "\n";
  }
  return out;
}

}  // namespace bfmdp
