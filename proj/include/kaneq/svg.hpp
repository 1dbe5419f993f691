// Copyright 2026 The kaneq Authors
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

// Static SVG line plots of observable series. Output bytes depend only on
// the input values.

#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "kaneq/csv.hpp"
#include "kaneq/experiments.hpp"
#include "kaneq/observables.hpp"

namespace kaneq {

struct LabeledSeries {
  std::string label;
  const ObservableSeries* series{nullptr};
};

struct SvgOptions {
  std::string title;
  int width{860};
  int height{520};
  std::size_t max_points{1200};  // per polyline
};

namespace detail {

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
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

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Observable {
  const char* name;
  const char* color;
  const std::vector<double> ObservableSeries::*values;
};

inline constexpr std::array<Observable, 4> kObservables = {{
    {"purity", "#1f77b4", &ObservableSeries::purity},
    {"entropy", "#d62728", &ObservableSeries::entropy},
    {"bloch_norm", "#2ca02c", &ObservableSeries::bloch_norm},
    {"fidelity", "#9467bd", &ObservableSeries::fidelity},
}};

inline constexpr std::array<const char*, 5> kDashes = {"", "8,4", "2,3", "10,3,2,3", "4,4"};

}  // namespace detail

inline std::string render_svg(const std::vector<LabeledSeries>& curves, const SvgOptions& opt = {}) {
  if (curves.empty()) throw DomainError("emit_svg: nothing to plot");
  double tau_max = 0.0;
  for (const auto& c : curves) {
    if (c.series == nullptr || c.series->empty()) throw DomainError("emit_svg: empty series");
    tau_max = std::max(tau_max, c.series->tau.back());
  }
  if (!(tau_max > 0.0)) tau_max = 1.0;

  const double left = 64, right = 230, top = 44, bottom = 52;
  const double plot_w = opt.width - left - right;
  const double plot_h = opt.height - top - bottom;
  auto px = [&](double tau) { return left + plot_w * tau / tau_max; };
  auto py = [&](double v) { return top + plot_h * (1.0 - std::clamp(v, 0.0, 1.05) / 1.05); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
         "\" height=\"" + std::to_string(opt.height) + "\" viewBox=\"0 0 " +
         std::to_string(opt.width) + " " + std::to_string(opt.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    svg += "<text x=\"" + detail::fmt2(left + plot_w / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
           detail::xml_escape(opt.title) + "</text>\n";
  }

  // Axes and ticks.
  svg += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<line x1=\"" + detail::fmt2(left) + "\" y1=\"" + detail::fmt2(top + plot_h) + "\" x2=\"" +
         detail::fmt2(left + plot_w) + "\" y2=\"" + detail::fmt2(top + plot_h) + "\"/>\n";
  svg += "<line x1=\"" + detail::fmt2(left) + "\" y1=\"" + detail::fmt2(top) + "\" x2=\"" +
         detail::fmt2(left) + "\" y2=\"" + detail::fmt2(top + plot_h) + "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double tau = tau_max * i / 5.0;
    const double x = px(tau);
    svg += "<line x1=\"" + detail::fmt2(x) + "\" y1=\"" + detail::fmt2(top + plot_h) + "\" x2=\"" +
           detail::fmt2(x) + "\" y2=\"" + detail::fmt2(top + plot_h + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + detail::fmt2(x) + "\" y=\"" + detail::fmt2(top + plot_h + 18) +
           "\" text-anchor=\"middle\">" + detail::tick_label(tau) + "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = 0.25 * i;
    const double y = py(v);
    svg += "<line x1=\"" + detail::fmt2(left - 5) + "\" y1=\"" + detail::fmt2(y) + "\" x2=\"" +
           detail::fmt2(left) + "\" y2=\"" + detail::fmt2(y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + detail::fmt2(left - 8) + "\" y=\"" + detail::fmt2(y + 4) +
           "\" text-anchor=\"end\">" + detail::tick_label(v) + "</text>\n";
  }
  svg += "<text x=\"" + detail::fmt2(left + plot_w / 2) + "\" y=\"" +
         detail::fmt2(opt.height - 12.0) + "\" text-anchor=\"middle\">scaled time tau</text>\n";
  svg += "</g>\n";

  // Curves.
  std::vector<std::pair<std::string, std::string>> legend;  // label, style attrs
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const ObservableSeries& s = *curves[ci].series;
    const std::size_t n = s.size();
    const std::size_t stride = std::max<std::size_t>(1, (n + opt.max_points - 1) / opt.max_points);
    const char* dash = detail::kDashes[ci % detail::kDashes.size()];
    for (const auto& obs : detail::kObservables) {
      const std::vector<double>& v = s.*(obs.values);
      std::string style = "fill=\"none\" stroke=\"" + std::string(obs.color) + "\" stroke-width=\"1.5\"";
      if (*dash) style += " stroke-dasharray=\"" + std::string(dash) + "\"";
      svg += "<polyline " + style + " points=\"";
      for (std::size_t k = 0; k < n; k += stride) {
        svg += detail::fmt2(px(s.tau[k])) + "," + detail::fmt2(py(v[k])) + " ";
      }
      if ((n - 1) % stride != 0) {
        svg += detail::fmt2(px(s.tau[n - 1])) + "," + detail::fmt2(py(v[n - 1]));
      }
      if (svg.back() == ' ') svg.pop_back();
      svg += "\"/>\n";
      const std::string label =
          curves[ci].label.empty() ? obs.name : curves[ci].label + " " + obs.name;
      legend.emplace_back(label, style);
    }
  }

  // Legend.
  svg += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  const double lx = left + plot_w + 16;
  for (std::size_t i = 0; i < legend.size(); ++i) {
    const double y = top + 8 + 16.0 * static_cast<double>(i);
    svg += "<line x1=\"" + detail::fmt2(lx) + "\" y1=\"" + detail::fmt2(y) + "\" x2=\"" +
           detail::fmt2(lx + 26) + "\" y2=\"" + detail::fmt2(y) + "\" " + legend[i].second + "/>\n";
    svg += "<text x=\"" + detail::fmt2(lx + 32) + "\" y=\"" + detail::fmt2(y + 4) + "\">" +
           detail::xml_escape(legend[i].first) + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

inline void emit_svg(const std::vector<LabeledSeries>& curves, const std::string& path,
                     const SvgOptions& opt = {}) {
  detail::write_file(path, render_svg(curves, opt));
}

inline void emit_svg(const ObservableSeries& s, const std::string& path, const SvgOptions& opt = {}) {
  emit_svg({LabeledSeries{"", &s}}, path, opt);
}

/// Label used for one grid point in plots, e.g. "kappa=0.05 theta=0.785398".
inline std::string grid_label(double kappa, double theta) {
  return "kappa=" + detail::tick_label(kappa) + " theta=" + detail::tick_label(theta);
}

inline std::vector<LabeledSeries> labeled(const SweepResult& r) {
  std::vector<LabeledSeries> out;
  for (std::size_t i = 0; i < r.rows.size() && i < r.series.size(); ++i) {
    out.push_back({grid_label(r.rows[i].kappa, r.rows[i].theta), &r.series[i]});
  }
  return out;
}

inline void emit_svg(const SweepResult& r, const std::string& path, const SvgOptions& opt = {}) {
  emit_svg(labeled(r), path, opt);
}

}  // namespace kaneq
