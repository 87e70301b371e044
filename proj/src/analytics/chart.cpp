#include "inspectkit/analytics/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>

#include <json.hpp>

namespace inspectkit {

using nlohmann::json;

namespace {

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                    "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
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
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string chart_to_json(const std::vector<ChartSeries>& series) {
  json out = json::array();
  for (const auto& s : series) {
    json values = json::array();
    for (const auto& [cat, p] : s.values) values.push_back({{"slug", slug(cat)}, {"percentage", p}});
    out.push_back({{"year", s.year},
                   {"group", s.group},
                   {"key", std::to_string(s.year) + s.group},
                   {"values", values}});
  }
  return out.dump();
}

std::string stats_to_json(const std::vector<GroupStats>& stats) {
  json out = json::array();
  for (const auto& s : stats) {
    json counts = json::object();
    json shares = json::object();
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      std::string key(slug(category_at(c)));
      counts[key] = s.label_counts[c];
      if (s.has_percentages()) shares[key] = s.percentages[c];
    }
    out.push_back({{"year", s.year},
                   {"group", s.group},
                   {"comment_total", s.comment_total},
                   {"labelled_comments", s.labelled_comments},
                   {"label_total", s.label_total},
                   {"label_counts", counts},
                   {"percentages", shares}});
  }
  return out.dump();
}

std::string render_svg_bar_chart(const std::vector<ChartSeries>& series) {
  const double left = 60, top = 40, plot_h = 300, bottom = 120;
  const double bar_w = 10;
  const double cluster_gap = 14;
  const std::size_t n = std::max<std::size_t>(series.size(), 1);
  const double cluster_w = bar_w * static_cast<double>(n) + cluster_gap;
  const double plot_w = cluster_w * kCategoryCount;
  const double width = left + plot_w + 160;
  const double height = top + plot_h + bottom;

  double max_share = 0;
  for (const auto& s : series) {
    for (const auto& [cat, p] : s.values) max_share = std::max(max_share, p);
  }
  double y_max = std::max(0.05, std::ceil(max_share * 20.0) / 20.0);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
         fmt(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + fmt(left) + "\" y=\"20\" font-size=\"14\">Share of inspection comments by category</text>\n";

  for (int tick = 0; tick <= 4; ++tick) {
    double v = y_max * tick / 4.0;
    double y = top + plot_h - plot_h * v / y_max;
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(left + plot_w) +
           "\" y2=\"" + fmt(y) + "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">" +
           fmt(v * 100) + "%</text>\n";
  }

  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    double x0 = left + cluster_w * static_cast<double>(c) + cluster_gap / 2;
    for (std::size_t k = 0; k < series.size(); ++k) {
      double p = series[k].values.size() > c ? series[k].values[c].second : 0.0;
      double h = plot_h * p / y_max;
      double x = x0 + bar_w * static_cast<double>(k);
      svg += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(top + plot_h - h) + "\" width=\"" +
             fmt(bar_w - 1) + "\" height=\"" + fmt(h) + "\" fill=\"" +
             kPalette[k % std::size(kPalette)] + "\"><title>" +
             xml_escape(std::to_string(series[k].year) + series[k].group) + " " +
             std::string(slug(category_at(c))) + " " + fmt(p * 100) + "%</title></rect>\n";
    }
    double lx = x0 + bar_w * static_cast<double>(n) / 2;
    double ly = top + plot_h + 12;
    svg += "<text x=\"" + fmt(lx) + "\" y=\"" + fmt(ly) + "\" text-anchor=\"end\" transform=\"rotate(-45 " +
           fmt(lx) + " " + fmt(ly) + ")\">" + std::string(slug(category_at(c))) + "</text>\n";
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    double y = top + 14.0 * static_cast<double>(k);
    double x = left + plot_w + 20;
    svg += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"10\" height=\"10\" fill=\"" +
           kPalette[k % std::size(kPalette)] + "\"/>\n";
    svg += "<text x=\"" + fmt(x + 14) + "\" y=\"" + fmt(y + 9) + "\">" +
           xml_escape(std::to_string(series[k].year) + series[k].group) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace inspectkit
