#include "inspectkit/analytics/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "inspectkit/core/error.hpp"
#include "inspectkit/corpus/corpus.hpp"
#include "inspectkit/kernels/label_counts.hpp"

namespace inspectkit {

namespace {

bool group_order(const std::pair<int, std::string>& a, const std::pair<int, std::string>& b) {
  if (a.first != b.first) return a.first > b.first;
  return a.second < b.second;
}

void finish(GroupStats& s, const std::vector<std::uint16_t>& masks) {
  auto counts = kernels::count_labels_parallel(masks);
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    s.label_counts[c] = counts[c];
    s.label_total += counts[c];
  }
  if (s.label_total == 0) return;
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    s.percentages[c] = static_cast<double>(s.label_counts[c]) / static_cast<double>(s.label_total);
  }
}

}  // namespace

GroupStats compute_stats(const Corpus& corpus, int year, const std::string& group) {
  GroupStats s;
  s.year = year;
  s.group = group;
  std::vector<std::uint16_t> masks;
  for (const auto& [id, c] : corpus.comments()) {
    if (c.year != year || c.group != group) continue;
    ++s.comment_total;
    if (auto labels = corpus.effective_labels(id)) {
      ++s.labelled_comments;
      masks.push_back(labels->mask());
    }
  }
  finish(s, masks);
  return s;
}

std::vector<GroupStats> compute_all_stats(const Corpus& corpus) {
  std::map<std::pair<int, std::string>, std::pair<GroupStats, std::vector<std::uint16_t>>> acc;
  for (const auto& [id, c] : corpus.comments()) {
    auto& [s, masks] = acc[{c.year, c.group}];
    s.year = c.year;
    s.group = c.group;
    ++s.comment_total;
    if (auto labels = corpus.effective_labels(id)) {
      ++s.labelled_comments;
      masks.push_back(labels->mask());
    }
  }
  std::vector<std::pair<int, std::string>> keys;
  for (const auto& [k, v] : acc) keys.push_back(k);
  std::sort(keys.begin(), keys.end(), group_order);

  std::vector<GroupStats> out;
  for (const auto& k : keys) {
    auto& [s, masks] = acc[k];
    finish(s, masks);
    out.push_back(std::move(s));
  }
  return out;
}

std::map<int, std::size_t> yearly_comment_totals(const Corpus& corpus) {
  std::map<int, std::size_t> totals;
  for (const auto& [id, c] : corpus.comments()) ++totals[c.year];
  return totals;
}

std::vector<TrendRule> default_trend_rules() {
  return {{Category::kPresentation, 0.15}, {Category::kInconsistent, 0.15}};
}

std::string advice_for(Category c) {
  switch (c) {
    case Category::kPresentation:
      return "many wording problems: ask the team to check their spelling again before submitting";
    case Category::kInconsistent:
      return "many inconsistencies: ask the team to check their past documents against the new ones";
    default:
      return "high share of '" + std::string(slug(c)) + "' comments (" +
             std::string(category_info(c).definition) + ")";
  }
}

std::vector<TrendFlag> trend_flags(const std::vector<GroupStats>& stats,
                                   const std::vector<TrendRule>& rules) {
  for (const auto& r : rules) {
    if (!(r.threshold >= 0 && r.threshold <= 1)) {
      throw InvalidArgument("threshold for " + std::string(slug(r.category)) + " outside [0,1]");
    }
  }
  std::vector<TrendFlag> flags;
  for (const auto& s : stats) {
    if (!s.has_percentages()) continue;
    for (const auto& r : rules) {
      double share = s.share(r.category);
      if (share >= r.threshold) {
        flags.push_back({s.year, s.group, r.category, r.threshold, share, advice_for(r.category)});
      }
    }
  }
  return flags;
}

std::vector<ChartSeries> chart_from_stats(const std::vector<GroupStats>& stats) {
  std::vector<ChartSeries> out;
  for (const auto& s : stats) {
    ChartSeries series{s.year, s.group, {}};
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      series.values.emplace_back(category_at(c), s.percentages[c]);
    }
    out.push_back(std::move(series));
  }
  return out;
}

std::vector<ChartSeries> percentage_chart_data(const Corpus& corpus) {
  return chart_from_stats(compute_all_stats(corpus));
}

std::string format_stats_table(const std::vector<GroupStats>& stats) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-22s", "category");
  out += buf;
  for (const auto& s : stats) {
    std::snprintf(buf, sizeof buf, "%14s", (std::to_string(s.year) + s.group).c_str());
    out += buf;
  }
  out += '\n';
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    std::snprintf(buf, sizeof buf, "%-22s", std::string(slug(category_at(c))).c_str());
    out += buf;
    for (const auto& s : stats) {
      std::snprintf(buf, sizeof buf, " %5zu (%4.1f%%)", s.label_counts[c], 100.0 * s.percentages[c]);
      out += buf;
    }
    out += '\n';
  }
  auto row = [&](const char* name, auto value) {
    std::snprintf(buf, sizeof buf, "%-22s", name);
    out += buf;
    for (const auto& s : stats) {
      std::snprintf(buf, sizeof buf, "%14zu", value(s));
      out += buf;
    }
    out += '\n';
  };
  row("label_total", [](const GroupStats& s) { return s.label_total; });
  row("comment_total", [](const GroupStats& s) { return s.comment_total; });
  return out;
}

std::string format_group_detail(const GroupStats& s) {
  std::string out = "group " + std::to_string(s.year) + s.group + "\n";
  char buf[96];
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    std::snprintf(buf, sizeof buf, "  %s=%zu (%.4f)\n", std::string(slug(category_at(c))).c_str(),
                  s.label_counts[c], s.percentages[c]);
    out += buf;
  }
  out += "  label_total=" + std::to_string(s.label_total) + "\n";
  out += "  comment_total=" + std::to_string(s.comment_total) + "\n";
  return out;
}

}  // namespace inspectkit
