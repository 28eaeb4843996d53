// Copyright 2026 the maskenc authors
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

#include <cstdio>
#include <stdexcept>
#include <string>

#include "maskenc/eval.hpp"

namespace maskenc {

enum class ReportFormat { csv, svg };

inline ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "svg") return ReportFormat::svg;
  throw std::invalid_argument("unknown report format: " + s);
}

namespace detail {

inline std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

struct SvgFrame {
  // fixed plot geometry; all coordinates printed with 2 decimals
  static constexpr double width = 640, height = 440;
  static constexpr double left = 70, right = 610, top = 30, bottom = 390;

  std::string body;

  void open(const char* x_label, const char* y_label) {
    body += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
            "width=\"640\" height=\"440\" viewBox=\"0 0 640 440\">\n";
    body += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"440\" "
            "fill=\"white\"/>\n";
    body += "<line x1=\"70\" y1=\"390\" x2=\"610\" y2=\"390\" "
            "stroke=\"black\"/>\n";
    body += "<line x1=\"70\" y1=\"30\" x2=\"70\" y2=\"390\" "
            "stroke=\"black\"/>\n";
    body += std::string("<text x=\"340\" y=\"428\" text-anchor=\"middle\" "
                        "font-family=\"sans-serif\" font-size=\"14\">") +
            x_label + "</text>\n";
    body += std::string("<text x=\"18\" y=\"210\" text-anchor=\"middle\" "
                        "font-family=\"sans-serif\" font-size=\"14\" "
                        "transform=\"rotate(-90 18 210)\">") +
            y_label + "</text>\n";
  }

  void close() { body += "</svg>\n"; }
};

}  // namespace detail

/// CSV rendering of a reconstruction curve: header `n,miou,err` plus one
/// row per point; byte-deterministic for identical inputs.
inline std::string emit_csv(const ReconCurve& curve) {
  std::string out = "n,miou,err\n";
  for (const auto& p : curve.points) {
    out += std::to_string(p.n);
    out += ',';
    out += detail::fmt("%.6f", p.miou);
    out += ',';
    out += detail::fmt("%.6f", p.err);
    out += '\n';
  }
  return out;
}

/// SVG 1.1 line chart of the error curve. Each data point carries a
/// machine-readable <title> ("n=.. err=.."), so plots can be checked
/// against the CSV without parsing coordinates.
inline std::string emit_svg(const ReconCurve& curve) {
  if (curve.points.empty())
    throw std::invalid_argument("emit_svg: empty curve");
  detail::SvgFrame f;
  f.open("components (N)", "reconstruction error (1 - mIoU)");

  double err_max = 0.0;
  for (const auto& p : curve.points) err_max = std::max(err_max, p.err);
  if (err_max <= 0.0) err_max = 1.0;
  const double n_lo = curve.points.front().n;
  const double n_hi = curve.points.back().n;
  const double n_span = n_hi > n_lo ? n_hi - n_lo : 1.0;
  auto px = [&](double n) {
    return detail::SvgFrame::left +
           (n - n_lo) / n_span *
               (detail::SvgFrame::right - detail::SvgFrame::left);
  };
  auto py = [&](double err) {
    return detail::SvgFrame::bottom -
           err / err_max * (detail::SvgFrame::bottom - detail::SvgFrame::top);
  };

  // y ticks
  for (int t = 0; t <= 4; ++t) {
    const double err = err_max * t / 4.0;
    const double y = py(err);
    f.body += "<line x1=\"66\" y1=\"" + detail::fmt("%.2f", y) +
              "\" x2=\"70\" y2=\"" + detail::fmt("%.2f", y) +
              "\" stroke=\"black\"/>\n";
    f.body += "<text x=\"62\" y=\"" + detail::fmt("%.2f", y + 4) +
              "\" text-anchor=\"end\" font-family=\"sans-serif\" "
              "font-size=\"11\">" +
              detail::fmt("%.3f", err) + "</text>\n";
  }
  // x ticks at every data point
  for (const auto& p : curve.points) {
    const double x = px(p.n);
    f.body += "<line x1=\"" + detail::fmt("%.2f", x) +
              "\" y1=\"390\" x2=\"" + detail::fmt("%.2f", x) +
              "\" y2=\"394\" stroke=\"black\"/>\n";
    f.body += "<text x=\"" + detail::fmt("%.2f", x) +
              "\" y=\"408\" text-anchor=\"middle\" "
              "font-family=\"sans-serif\" font-size=\"11\">" +
              std::to_string(p.n) + "</text>\n";
  }

  std::string pts;
  for (const auto& p : curve.points) {
    if (!pts.empty()) pts += ' ';
    pts += detail::fmt("%.2f", px(p.n)) + "," + detail::fmt("%.2f", py(p.err));
  }
  f.body += "<polyline points=\"" + pts +
            "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  for (const auto& p : curve.points) {
    f.body += "<circle cx=\"" + detail::fmt("%.2f", px(p.n)) + "\" cy=\"" +
              detail::fmt("%.2f", py(p.err)) +
              "\" r=\"3\" fill=\"#1f77b4\"><title>n=" + std::to_string(p.n) +
              " err=" + detail::fmt("%.6f", p.err) + "</title></circle>\n";
  }
  f.close();
  return f.body;
}

/// CSV rendering of a codec comparison: one row per codec, histogram bins
/// appended as h00..h19 counts.
inline std::string emit_csv(const CodecReport& report) {
  std::string out = "codec,count,mean_iou,median_iou";
  for (int b = 0; b < 20; ++b) {
    char col[8];
    std::snprintf(col, sizeof col, ",h%02d", b);
    out += col;
  }
  out += '\n';
  for (const auto& s : report.codecs) {
    out += s.name;
    out += ',' + std::to_string(s.count);
    out += ',' + detail::fmt("%.6f", s.mean_iou);
    out += ',' + detail::fmt("%.6f", s.median_iou);
    for (auto h : s.histogram) out += ',' + std::to_string(h);
    out += '\n';
  }
  return out;
}

/// SVG bar chart of per-codec mean IoU.
inline std::string emit_svg(const CodecReport& report) {
  if (report.codecs.empty())
    throw std::invalid_argument("emit_svg: empty report");
  detail::SvgFrame f;
  f.open("codec", "mean IoU");
  const std::size_t n = report.codecs.size();
  const double span = detail::SvgFrame::right - detail::SvgFrame::left;
  const double slot = span / static_cast<double>(n);
  auto py = [&](double v) {
    return detail::SvgFrame::bottom -
           v * (detail::SvgFrame::bottom - detail::SvgFrame::top);
  };
  for (int t = 0; t <= 4; ++t) {
    const double y = py(t / 4.0);
    f.body += "<text x=\"62\" y=\"" + detail::fmt("%.2f", y + 4) +
              "\" text-anchor=\"end\" font-family=\"sans-serif\" "
              "font-size=\"11\">" +
              detail::fmt("%.2f", t / 4.0) + "</text>\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = report.codecs[i];
    const double x0 = detail::SvgFrame::left + slot * i + slot * 0.2;
    const double w = slot * 0.6;
    const double y = py(s.mean_iou);
    f.body += "<rect x=\"" + detail::fmt("%.2f", x0) + "\" y=\"" +
              detail::fmt("%.2f", y) + "\" width=\"" + detail::fmt("%.2f", w) +
              "\" height=\"" + detail::fmt("%.2f", detail::SvgFrame::bottom - y) +
              "\" fill=\"#1f77b4\"><title>" + s.name +
              " mean_iou=" + detail::fmt("%.6f", s.mean_iou) +
              "</title></rect>\n";
    f.body += "<text x=\"" + detail::fmt("%.2f", x0 + w / 2) +
              "\" y=\"408\" text-anchor=\"middle\" "
              "font-family=\"sans-serif\" font-size=\"11\">" +
              s.name + "</text>\n";
  }
  f.close();
  return f.body;
}

inline std::string emit_report(const ReconCurve& curve, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv:
      return emit_csv(curve);
    case ReportFormat::svg:
      return emit_svg(curve);
  }
  throw std::invalid_argument("unknown report format");
}

inline std::string emit_report(const CodecReport& report,
                               ReportFormat format) {
  switch (format) {
    case ReportFormat::csv:
      return emit_csv(report);
    case ReportFormat::svg:
      return emit_svg(report);
  }
  throw std::invalid_argument("unknown report format");
}

}  // namespace maskenc
