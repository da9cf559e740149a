// SPDX-License-Identifier: Apache-2.0
#include "shrinkcomb/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace shrinkcomb {

namespace {

constexpr double kWidth = 760;
constexpr double kHeight = 540;
constexpr double kLeft = 70, kRight = 30, kTop = 30, kBottom = 60;

const char* method_color(Method m) {
  switch (m) {
    case Method::no_reg: return "#cc00cc";
    case Method::reg_data: return "#d62728";
    case Method::reg_data_iter: return "#1f77b4";
    case Method::reg_exh: return "#2ca02c";
    case Method::perfect_csi: return "#000000";
  }
  return "#888888";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string records_to_svg(const std::vector<SweepRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("records_to_svg: nothing to plot");
  }
  std::map<Method, std::vector<std::pair<double, double>>> series;
  double x_min = records.front().sweep_value, x_max = x_min;
  double ser_min = 1.0, ser_max = 1e-12;
  for (const auto& r : records) {
    series[r.method].emplace_back(r.sweep_value, r.ser);
    x_min = std::min(x_min, r.sweep_value);
    x_max = std::max(x_max, r.sweep_value);
    if (r.ser > 0.0) ser_min = std::min(ser_min, r.ser);
    ser_max = std::max(ser_max, r.ser);
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  // Decade-aligned log axis; zero-SER points clip to the bottom edge.
  const double log_lo = std::floor(std::log10(std::max(ser_min, 1e-9)));
  const double log_hi = std::ceil(std::log10(std::max(ser_max, 1e-9)));
  const double span_x = x_max - x_min;
  const double span_y = std::max(log_hi - log_lo, 1.0);

  auto px = [&](double x) {
    return kLeft + (x - x_min) / span_x * (kWidth - kLeft - kRight);
  };
  auto py = [&](double ser) {
    const double l = std::clamp(ser > 0.0 ? std::log10(ser) : log_lo, log_lo, log_hi);
    return kTop + (log_hi - l) / span_y * (kHeight - kTop - kBottom);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " +
         num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Decade gridlines and y tick labels.
  for (double l = log_lo; l <= log_hi + 1e-9; l += 1.0) {
    const double y = py(std::pow(10.0, l));
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(kWidth - kRight) + "\" y2=\"" + num(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) +
           "\" text-anchor=\"end\" font-size=\"12\">1e" + num(l) + "</text>\n";
  }
  // X ticks at the sweep values of the first series.
  for (const auto& pt : series.begin()->second) {
    const double x = px(pt.first);
    svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(kHeight - kBottom) +
           "\" x2=\"" + num(x) + "\" y2=\"" + num(kHeight - kBottom + 6) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(kHeight - kBottom + 22) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + num(pt.first) + "</text>\n";
  }
  // Frame.
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
         num(kWidth - kLeft - kRight) + "\" height=\"" +
         num(kHeight - kTop - kBottom) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" +
         num(kHeight - 16) + "\" text-anchor=\"middle\" font-size=\"13\">" +
         sweep_kind_name(records.front().sweep_kind) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + num((kTop + kHeight - kBottom) / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
         num((kTop + kHeight - kBottom) / 2) + ")\">SER</text>\n";

  double legend_y = kTop + 16;
  for (const auto& [method, points] : series) {
    std::string poly;
    for (const auto& [x, s] : points) {
      poly += num(px(x)) + "," + num(py(s)) + " ";
    }
    svg += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"" +
           std::string(method_color(method)) + "\" stroke-width=\"2\"/>\n";
    for (const auto& [x, s] : points) {
      svg += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(s)) +
             "\" r=\"3\" fill=\"" + std::string(method_color(method)) + "\"/>\n";
    }
    svg += "<rect x=\"" + num(kWidth - kRight - 150) + "\" y=\"" +
           num(legend_y - 9) + "\" width=\"14\" height=\"4\" fill=\"" +
           std::string(method_color(method)) + "\"/>\n";
    svg += "<text x=\"" + num(kWidth - kRight - 130) + "\" y=\"" + num(legend_y) +
           "\" font-size=\"12\">" + method_name(method) + "</text>\n";
    legend_y += 18;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace shrinkcomb
