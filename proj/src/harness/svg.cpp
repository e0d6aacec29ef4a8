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
#include <cmath>
#include <locale>
#include <sstream>
#include <stdexcept>

#include "bfmdp/harness.hpp"
#include "bfmdp/serialization.hpp"

namespace bfmdp {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / magnitude;
  return (r <= 1.0 ? 1.0 : r <= 2.0 ? 2.0 : r <= 5.0 ? 5.0 : 10.0) * magnitude;
}

std::string label(double value) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << value;
  return out.str();
}

}  // namespace

std::string render_svg(const std::vector<PanelSummary>& panel, const std::string& title, const std::string& y_label) {
  if (panel.empty()) throw std::invalid_argument("render_svg: no traces in panel");
  double x_max = 1.0;
  double y_max = 0.0;
  for (const PanelSummary& s : panel) {
    if (s.episodes.empty()) throw std::invalid_argument("render_svg: empty trace for " + s.algorithm);
    x_max = std::max(x_max, static_cast<double>(s.episodes.back()));
    for (double v : s.max) y_max = std::max(y_max, v);
  }
  const double y_step = nice_step(y_max > 0.0 ? y_max : 1.0);
  const double y_top = std::max(y_step, std::ceil(y_max / y_step) * y_step);
  const double x_step = nice_step(x_max);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + x / x_max * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - y / y_top * plot_h; };

  std::ostringstream svg;
  svg.imbue(std::locale::classic());
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";

  svg << "<g class=\"axes\" stroke=\"#333\">\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft + plot_w << "\" y2=\"" << py(0) << "\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << py(0) << "\"/>\n";
  svg << "</g>\n<g class=\"ticks\" fill=\"#333\">\n";
  for (double x = 0.0; x <= x_max + 1e-9 * x_max; x += x_step) {
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << py(0) << "\" x2=\"" << px(x) << "\" y2=\"" << py(0) + 5
        << "\" stroke=\"#333\"/><text x=\"" << px(x) << "\" y=\"" << py(0) + 19 << "\" text-anchor=\"middle\">"
        << label(x) << "</text>\n";
  }
  for (double y = 0.0; y <= y_top + 1e-9 * y_top; y += y_step) {
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << kLeft << "\" y2=\"" << py(y)
        << "\" stroke=\"#333\"/><text x=\"" << kLeft - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
        << label(y) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">episode</text>\n";
  svg << "<text transform=\"translate(18," << kTop + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(y_label) << "</text>\n";

  for (std::size_t i = 0; i < panel.size(); ++i) {
    const PanelSummary& s = panel[i];
    const char* color = kColors[i % std::size(kColors)];
    svg << "<polygon class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
    for (std::size_t j = 0; j < s.episodes.size(); ++j)
      svg << px(static_cast<double>(s.episodes[j])) << ',' << py(s.max[j]) << ' ';
    for (std::size_t j = s.episodes.size(); j-- > 0;)
      svg << px(static_cast<double>(s.episodes[j])) << ',' << py(s.min[j]) << ' ';
    svg << "\"/>\n";
    svg << "<polyline class=\"mean\" data-algorithm=\"" << escape(s.algorithm) << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t j = 0; j < s.episodes.size(); ++j)
      svg << px(static_cast<double>(s.episodes[j])) << ',' << py(s.mean[j]) << ' ';
    svg << "\"/>\n";
  }

  svg << "<g class=\"legend\">\n";
  for (std::size_t i = 0; i < panel.size(); ++i) {
    const double y = kTop + 10 + 22.0 * static_cast<double>(i);
    const double x = kWidth - kRight + 20;
    svg << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 24 << "\" y2=\"" << y << "\" stroke=\""
        << kColors[i % std::size(kColors)] << "\" stroke-width=\"3\"/><text x=\"" << x + 30 << "\" y=\"" << y + 4
        << "\">" << escape(panel[i].algorithm) << " (" << panel[i].seeds << " seeds)</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void emit_svg(const std::vector<PanelSummary>& panel, const std::string& title, const std::string& y_label,
              const std::filesystem::path& path) {
  write_text_file(path, render_svg(panel, title, y_label));
}

}  // namespace bfmdp
