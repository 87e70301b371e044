#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "inspectkit/core/taxonomy.hpp"

namespace inspectkit {

class Corpus;

struct GroupStats {
  int year = 0;
  std::string group;
  /// All comments of the group, labelled or not.
  std::size_t comment_total = 0;
  std::size_t labelled_comments = 0;
  std::array<std::size_t, kCategoryCount> label_counts{};
  std::size_t label_total = 0;
  /// label_counts / label_total; all zero when label_total is 0.
  std::array<double, kCategoryCount> percentages{};

  bool has_percentages() const { return label_total > 0; }
  std::size_t count(Category c) const { return label_counts[index_of(c)]; }
  double share(Category c) const { return percentages[index_of(c)]; }
};

/// Counts effective labels of the comments in (year, group). Unlabelled
/// comments add to comment_total only.
GroupStats compute_stats(const Corpus& corpus, int year, const std::string& group);

/// Stats for every (year, group) present, newest year first, then by group.
std::vector<GroupStats> compute_all_stats(const Corpus& corpus);

/// Distinct comments per year, groups merged.
std::map<int, std::size_t> yearly_comment_totals(const Corpus& corpus);

struct TrendRule {
  Category category;
  double threshold = 0;
};

struct TrendFlag {
  int year = 0;
  std::string group;
  Category category;
  double threshold = 0;
  double share = 0;
  std::string message;
};

/// Rules used when none are configured: presentation and inconsistent at 0.15.
std::vector<TrendRule> default_trend_rules();

/// One flag per (group, rule) whose share meets the threshold. Throws
/// InvalidArgument for a threshold outside [0,1].
std::vector<TrendFlag> trend_flags(const std::vector<GroupStats>& stats,
                                   const std::vector<TrendRule>& rules);

std::string advice_for(Category c);

struct ChartSeries {
  int year = 0;
  std::string group;
  /// Taxonomy order, always 13 entries.
  std::vector<std::pair<Category, double>> values;
};

std::vector<ChartSeries> percentage_chart_data(const Corpus& corpus);
std::vector<ChartSeries> chart_from_stats(const std::vector<GroupStats>& stats);

/// Fixed-width text table, one row per group, counts per category.
std::string format_stats_table(const std::vector<GroupStats>& stats);

/// `slug=count (share)` lines for a single group.
std::string format_group_detail(const GroupStats& stats);

}  // namespace inspectkit
