// Copyright 2026 The dpfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpfl/chart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpfl/io.hpp"
#include "dpfl/util.hpp"

namespace dpfl {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 70.0;

std::string fmt(double v) { return format_significant(v, 6); }

// Tick positions at a 1/2/5 step covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(0.5, std::abs(lo) * 0.1);
    lo -= pad;
    hi += pad;
  }
  const double raw_step = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw_step) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> ticks;
  double t = std::floor(lo / step) * step;
  while (t < hi + 0.5 * step) {
    ticks.push_back(t);
    t += step;
  }
  return ticks;
}

}  // namespace

std::string render_svg(const std::vector<TradeoffRecord>& records,
                       InfoField x_field, InfoField y_field) {
  std::vector<std::pair<double, double>> points;
  for (const auto& r : records) {
    const double x = info_field_value(r, x_field);
    const double y = info_field_value(r, y_field);
    if (std::isfinite(x) && std::isfinite(y)) points.emplace_back(x, y);
  }
  if (points.empty()) throw EmptyRecords("render_svg: no plottable records");

  double x_lo = points.front().first, x_hi = x_lo;
  double y_lo = points.front().second, y_hi = y_lo;
  for (const auto& [x, y] : points) {
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  const std::vector<double> x_ticks = nice_ticks(x_lo, x_hi);
  const std::vector<double> y_ticks = nice_ticks(y_lo, y_hi);
  const double ax_lo = x_ticks.front(), ax_hi = x_ticks.back();
  const double ay_lo = y_ticks.front(), ay_hi = y_ticks.back();

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto map_x = [&](double v) {
    return kMarginLeft + (v - ax_lo) / (ax_hi - ax_lo) * plot_w;
  };
  auto map_y = [&](double v) {
    return kMarginTop + (1.0 - (v - ay_lo) / (ay_hi - ay_lo)) * plot_h;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
         "width=\"800\" height=\"600\">\n"
      << "  <rect width=\"800\" height=\"600\" fill=\"white\"/>\n";

  // Grid and tick labels.
  svg << "  <g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double t : x_ticks) {
    const double sx = map_x(t);
    svg << "    <line x1=\"" << fmt(sx) << "\" y1=\"" << fmt(kMarginTop)
        << "\" x2=\"" << fmt(sx) << "\" y2=\"" << fmt(kMarginTop + plot_h)
        << "\"/>\n";
  }
  for (double t : y_ticks) {
    const double sy = map_y(t);
    svg << "    <line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(sy)
        << "\" x2=\"" << fmt(kMarginLeft + plot_w) << "\" y2=\"" << fmt(sy)
        << "\"/>\n";
  }
  svg << "  </g>\n";

  svg << "  <g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
  for (double t : x_ticks) {
    svg << "    <text x=\"" << fmt(map_x(t)) << "\" y=\""
        << fmt(kMarginTop + plot_h + 18.0)
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t : y_ticks) {
    svg << "    <text x=\"" << fmt(kMarginLeft - 8.0) << "\" y=\""
        << fmt(map_y(t) + 4.0) << "\" text-anchor=\"end\">" << fmt(t)
        << "</text>\n";
  }
  svg << "  </g>\n";

  // Frame.
  svg << "  <rect x=\"" << fmt(kMarginLeft) << "\" y=\"" << fmt(kMarginTop)
      << "\" width=\"" << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  // Axis labels.
  svg << "  <text x=\"" << fmt(kMarginLeft + plot_w / 2.0) << "\" y=\""
      << fmt(kHeight - 22.0)
      << "\" font-family=\"sans-serif\" font-size=\"15\" "
         "text-anchor=\"middle\">"
      << info_field_name(x_field) << " (nats)</text>\n";
  svg << "  <text x=\"20\" y=\"" << fmt(kMarginTop + plot_h / 2.0)
      << "\" font-family=\"sans-serif\" font-size=\"15\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << fmt(kMarginTop + plot_h / 2.0) << ")\">" << info_field_name(y_field)
      << " (nats)</text>\n";

  // Frontier overlay first, markers on top.
  const auto front = frontier(records, x_field, y_field);
  if (front.size() >= 2) {
    svg << "  <polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" "
           "points=\"";
    for (std::size_t i = 0; i < front.size(); ++i) {
      if (i) svg << ' ';
      svg << fmt(map_x(front[i].first)) << ',' << fmt(map_y(front[i].second));
    }
    svg << "\"/>\n";
  }
  svg << "  <g fill=\"#1f77b4\" fill-opacity=\"0.8\">\n";
  for (const auto& [x, y] : points) {
    svg << "    <circle cx=\"" << fmt(map_x(x)) << "\" cy=\"" << fmt(map_y(y))
        << "\" r=\"3.5\"/>\n";
  }
  svg << "  </g>\n</svg>\n";
  return svg.str();
}

void emit_svg(const std::vector<TradeoffRecord>& records, InfoField x_field,
              InfoField y_field, const std::string& out_path) {
  atomic_write_file(out_path, render_svg(records, x_field, y_field));
}

}  // namespace dpfl
