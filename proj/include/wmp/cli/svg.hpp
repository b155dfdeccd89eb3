// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "wmp/cli/pipeline.hpp"

namespace wmp::cli {

enum class PlotKind { ReturnMap, NestedIntervals, DeltaTrend };

inline const char* to_string(PlotKind k) {
  switch (k) {
    case PlotKind::ReturnMap:
      return "return_map";
    case PlotKind::NestedIntervals:
      return "nested_intervals";
    default:
      return "delta_trend";
  }
}

inline PlotKind parse_plot_kind(const std::string& s) {
  for (PlotKind k : {PlotKind::ReturnMap, PlotKind::NestedIntervals, PlotKind::DeltaTrend}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown plot kind '" + s + "'");
}

namespace svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

/// Linear map from a data box to a pixel box with y pointing up.
struct Frame {
  double left, top, width, height;
  double x0, x1, y0, y1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double py(double y) const { return top + height - (y - y0) / (y1 - y0) * height; }
};

class Document {
 public:
  Document(int w, int h) : w_(w), h_(h) {}

  void line(double x1, double y1, double x2, double y2, const char* stroke, double sw = 1) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
             num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(sw) + "\"/>\n";
  }
  void rect(double x, double y, double w, double h, const char* fill) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
             num(h) + "\" fill=\"" + fill + "\"/>\n";
  }
  void circle(double x, double y, double r, const char* fill) {
    body_ += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(r) + "\" fill=\"" +
             fill + "\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke) {
    body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
             "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) body_ += ' ';
      body_ += num(pts[i].first) + "," + num(pts[i].second);
    }
    body_ += "\"/>\n";
  }
  void text(double x, double y, const std::string& s, const char* anchor = "start", int size = 12) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" +
             std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
  }
  void frame(const Frame& f) {
    body_ += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" + num(f.width) +
             "\" height=\"" + num(f.height) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  }

  std::string str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(w_) + "\" height=\"" + std::to_string(h_) + "\" viewBox=\"0 0 " +
           std::to_string(w_) + " " + std::to_string(h_) + "\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
  }

 private:
  int w_, h_;
  std::string body_;
};

inline double log10_of(const Real& v) { return log2(v).to_double() * std::log10(2.0); }

inline std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace svg

namespace detail {

inline std::string plot_return_map(const ReportBundle& b) {
  if (!b.return_map || b.return_map->curves.empty()) throw EmptyTable("return map has no branches");
  const ReturnMapPlot& r = *b.return_map;
  const double lo = r.V.lo().to_double();
  const double hi = r.V.hi().to_double();
  svg::Document doc(640, 640);
  svg::Frame f{60, 40, 540, 540, lo, hi, lo, hi};
  doc.frame(f);
  doc.line(f.px(lo), f.py(lo), f.px(hi), f.py(hi), "#bbb");
  for (const auto& c : r.curves) {
    doc.line(f.px(c.lo), f.top, f.px(c.lo), f.top + f.height, "#ddd", 0.5);
    doc.line(f.px(c.hi), f.top, f.px(c.hi), f.top + f.height, "#ddd", 0.5);
  }
  for (const auto& c : r.curves) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [x, y] : c.points) pts.emplace_back(f.px(x), f.py(std::clamp(y, lo, hi)));
    doc.polyline(pts, c.time == r.central_time && r.U ? "#c0392b" : "#1f4e79");
  }
  doc.text(330, 24, "First-return map on V = (" + svg::short_num(lo) + ", " +
                        svg::short_num(hi) + ")", "middle", 14);
  doc.text(f.px(lo), 600, svg::short_num(lo), "middle");
  doc.text(f.px(hi), 600, svg::short_num(hi), "middle");
  doc.text(330, 625,
           std::to_string(r.curves.size()) + " branches drawn, " + std::to_string(r.hidden) +
               " narrower than |V|/1000",
           "middle", 11);
  return doc.str();
}

inline std::string plot_nested_intervals(const ReportBundle& b) {
  const auto& rows = b.ranges.ranges;
  if (rows.empty()) throw EmptyTable("transfer-range sequence is empty");
  const int row_h = 24;
  const int height = 80 + row_h * static_cast<int>(rows.size());
  svg::Document doc(720, height);
  svg::Frame f{90, 40, 600, static_cast<double>(row_h * rows.size()), 0, 1, 0, 1};
  doc.text(390, 24, "Transfer ranges: V_n (light) and U_n (dark)", "middle", 14);
  doc.line(f.px(0.5), f.top - 6, f.px(0.5), f.top + f.height + 6, "#c0392b", 0.5);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    double y = f.top + static_cast<double>(i) * row_h + 3;
    auto bar = [&](const Interval& I, const char* fill, double pad) {
      double x0 = f.px(I.lo().to_double());
      double x1 = f.px(I.hi().to_double());
      double w = std::max(x1 - x0, 1.0);
      doc.rect((x0 + x1 - w) / 2, y + pad, w, row_h - 6 - 2 * pad, fill);
    };
    bar(r.V, "#9ecae1", 0);
    bar(r.U, "#08519c", 4);
    doc.text(84, y + row_h / 2.0 + 1, "n=" + std::to_string(r.n), "end", 11);
  }
  doc.text(f.px(0), f.top + f.height + 20, "0", "middle");
  doc.text(f.px(0.5), f.top + f.height + 20, "c", "middle");
  doc.text(f.px(1), f.top + f.height + 20, "1", "middle");
  return doc.str();
}

inline std::string plot_delta_trend(const ReportBundle& b) {
  const auto& rows = b.ranges.ranges;
  if (rows.empty()) throw EmptyTable("transfer-range sequence is empty");
  std::vector<double> xs, delta, len;
  for (const auto& r : rows) {
    xs.push_back(r.n);
    delta.push_back(svg::log10_of(r.delta));
    len.push_back(svg::log10_of(r.V_length));
  }
  auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  double x0 = *xmin - 0.5, x1 = *xmax + 0.5;
  double y0 = std::min(*std::min_element(delta.begin(), delta.end()),
                       *std::min_element(len.begin(), len.end()));
  double y1 = std::max(*std::max_element(delta.begin(), delta.end()),
                       *std::max_element(len.begin(), len.end()));
  y0 = std::floor(y0) - 1;
  y1 = std::ceil(y1) + 1;
  svg::Document doc(720, 480);
  svg::Frame f{80, 40, 600, 380, x0, x1, y0, y1};
  doc.frame(f);
  doc.text(380, 24, "log10 delta_n (red) and log10 |V_n| (blue)", "middle", 14);
  for (const auto& [series, color] : {std::pair{&delta, "#c0392b"}, std::pair{&len, "#1f4e79"}}) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(f.px(xs[i]), f.py((*series)[i]));
    if (pts.size() > 1) doc.polyline(pts, color);
    for (const auto& [px, py] : pts) doc.circle(px, py, 3, color);
  }
  for (double n : xs) doc.text(f.px(n), f.top + f.height + 16, svg::short_num(n), "middle", 10);
  doc.text(f.left - 6, f.py(y0) + 4, svg::short_num(y0), "end", 10);
  doc.text(f.left - 6, f.py(y1) + 4, svg::short_num(y1), "end", 10);
  doc.text(380, 470, "n", "middle");
  return doc.str();
}

}  // namespace detail

/// Static SVG of one figure. Throws EmptyTable when its table has no rows.
inline std::string plot_svg(const ReportBundle& b, PlotKind kind) {
  switch (kind) {
    case PlotKind::ReturnMap:
      return detail::plot_return_map(b);
    case PlotKind::NestedIntervals:
      return detail::plot_nested_intervals(b);
    default:
      return detail::plot_delta_trend(b);
  }
}

}  // namespace wmp::cli
