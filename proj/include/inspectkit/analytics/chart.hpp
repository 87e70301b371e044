#pragma once

#include <string>
#include <vector>

#include "inspectkit/analytics/stats.hpp"

namespace inspectkit {

/// `[{"year":..,"group":..,"key":"2022G1","values":[{"slug":..,"percentage":..}]}]`
std::string chart_to_json(const std::vector<ChartSeries>& series);

/// `[{"year","group","comment_total","label_total","label_counts":{slug:n},
///   "percentages":{slug:p}}]`; percentages is empty when label_total is 0.
std::string stats_to_json(const std::vector<GroupStats>& stats);

/// Grouped bar chart: one cluster per category, one bar per series.
std::string render_svg_bar_chart(const std::vector<ChartSeries>& series);

}  // namespace inspectkit
