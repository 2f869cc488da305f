#pragma once

// Experiment results and their CSV / SVG emission.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "infoflow/errors.hpp"
#include "infoflow/prob_core.hpp"

namespace infoflow {

struct ReportRow {
  std::string param;
  InfoValue empirical;
  std::optional<double> predicted;  ///< nullopt: no analytic or predicted value applies
  std::string series;               ///< curve the row belongs to, e.g. "uniform" or "E2"
  std::vector<std::string> flags;

  /// empirical - predicted, when both are finite.
  std::optional<double> discrepancy() const {
    if (!predicted || empirical.is_infinite) return std::nullopt;
    return empirical.value - *predicted;
  }
};

struct ExperimentReport {
  std::string experiment;
  std::vector<ReportRow> rows;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::size_t cells = 0;
  double wall_seconds = 0.0;
};

inline constexpr const char* kCsvHeader = "param,empirical_nats,predicted_nats,discrepancy_nats,flags";

/// 12 significant digits; never NaN, never "-0".
inline std::string format_number(double v) {
  if (std::isnan(v)) throw ConsistencyError("refusing to emit NaN");
  if (std::isinf(v)) return "inf-flag";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string row_flags(const ReportRow& row) {
  std::string out;
  auto append = [&](const std::string& f) {
    if (!out.empty()) out += ';';
    out += f;
  };
  if (!row.series.empty()) append("series=" + row.series);
  for (const auto& f : row.flags) append(f);
  return out;
}

inline std::string to_csv(const ExperimentReport& report) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& row : report.rows) {
    out += row.param;
    out += ',';
    out += row.empirical.is_infinite ? "inf-flag" : format_number(row.empirical.value);
    out += ',';
    if (row.predicted) out += format_number(*row.predicted);
    out += ',';
    if (row.empirical.is_infinite && row.predicted) {
      out += "inf-flag";
    } else if (auto d = row.discrepancy()) {
      out += format_number(*d);
    }
    out += ',';
    out += row_flags(row);
    out += '\n';
  }
  return out;
}

/// Static scatter (empirical) plus dashed line (predicted) per series.
inline std::string to_svg(const ExperimentReport& report, const std::string& x_label) {
  constexpr double width = 640, height = 420, left = 60, right = 20, top = 30, bottom = 50;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  struct Point {
    double x;
    std::optional<double> emp;
    std::optional<double> pred;
  };
  std::map<std::string, std::vector<Point>> curves;
  std::vector<std::string> order;
  double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const auto& row = report.rows[r];
    char* end = nullptr;
    double x = std::strtod(row.param.c_str(), &end);
    if (end == row.param.c_str()) x = static_cast<double>(r);
    Point p{x, std::nullopt, row.predicted};
    if (!row.empirical.is_infinite) p.emp = row.empirical.value;
    if (!curves.count(row.series)) order.push_back(row.series);
    curves[row.series].push_back(p);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    for (auto y : {p.emp, p.pred}) {
      if (y) {
        ymin = std::min(ymin, *y);
        ymax = std::max(ymax, *y);
      }
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
  auto sy = [&](double y) { return height - bottom - (y - ymin) / (ymax - ymin) * (height - top - bottom); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right
     << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
     << height - bottom << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (width / 2) << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
     << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << (height / 2) << "\" transform=\"rotate(-90 16 " << (height / 2)
     << ")\" text-anchor=\"middle\">MI (nats)</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double y = ymin + (ymax - ymin) * t / 4.0;
    os << "<text x=\"" << left - 6 << "\" y=\"" << sy(y) + 4 << "\" text-anchor=\"end\">"
       << format_number(std::round(y * 100) / 100) << "</text>\n";
    const double x = xmin + (xmax - xmin) * t / 4.0;
    os << "<text x=\"" << sx(x) << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">"
       << format_number(std::round(x * 100) / 100) << "</text>\n";
  }
  for (std::size_t c = 0; c < order.size(); ++c) {
    const char* color = palette[c % 6];
    const auto& pts = curves[order[c]];
    std::string path;
    for (const auto& p : pts) {
      if (!p.pred) continue;
      path += (path.empty() ? "M" : " L") + format_number(sx(p.x)) + " " + format_number(sy(*p.pred));
    }
    if (!path.empty()) {
      os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color
         << "\" stroke-dasharray=\"6 4\"/>\n";
    }
    for (const auto& p : pts) {
      if (p.emp) {
        os << "<circle cx=\"" << format_number(sx(p.x)) << "\" cy=\"" << format_number(sy(*p.emp))
           << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
      }
    }
    os << "<text x=\"" << width - right - 120 << "\" y=\"" << top + 16 * c << "\" fill=\"" << color
       << "\">" << (order[c].empty() ? report.experiment : order[c]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace infoflow
