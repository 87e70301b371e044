#include <doctest.h>

#include <algorithm>
#include <random>

#include <json.hpp>

#include "inspectkit/analytics/chart.hpp"
#include "inspectkit/analytics/stats.hpp"
#include "inspectkit/core/error.hpp"
#include "inspectkit/corpus/corpus.hpp"
#include "inspectkit/corpus/corpus_csv.hpp"
#include "inspectkit/kernels/label_counts.hpp"
#include "test_support.hpp"

using namespace inspectkit;

namespace {

struct Row {
  int year;
  const char* group;
  std::array<std::size_t, kCategoryCount> counts;
  std::size_t total;
};

// Published per-group label counts, taxonomy order.
const std::array<Row, 4> kGroupCounts{{
    {2022, "G1", {50, 13, 22, 6, 3, 10, 24, 22, 1, 2, 57, 53, 6}, 269},
    {2021, "G1", {3, 2, 8, 6, 0, 8, 22, 18, 2, 0, 21, 33, 0}, 123},
    {2020, "G1", {14, 0, 8, 8, 0, 11, 21, 13, 2, 1, 11, 19, 2}, 110},
    {2020, "G2", {14, 1, 2, 3, 2, 6, 12, 6, 0, 0, 12, 27, 0}, 85},
}};

const Corpus& group_counts() {
  static const Corpus c = import_csv(testing::fixture_dir() / "group_counts" / "comments.csv");
  return c;
}

InspectionComment bare(std::string id, int year, std::string group) {
  InspectionComment c;
  c.id = std::move(id);
  c.year = year;
  c.group = std::move(group);
  c.body = "note";
  c.location = CodeHostLocation{"r/x", 1, std::nullopt};
  return c;
}

Corpus rebuild_shuffled(const Corpus& src, std::mt19937_64& rng) {
  std::vector<InspectionComment> comments;
  for (const auto& [id, c] : src.comments()) {
    auto copy = c;
    copy.parent_id.reset();
    comments.push_back(copy);
  }
  std::shuffle(comments.begin(), comments.end(), rng);
  Corpus out;
  out.ingest(comments);
  for (const auto& c : comments) {
    if (auto l = src.effective_labels(c.id)) out.assign_labels(c.id, *l, Labeler::human("x"));
  }
  return out;
}

}  // namespace

TEST_SUITE("analytics") {
  TEST_CASE("fixture reproduces every published count") {
    for (const auto& row : kGroupCounts) {
      CAPTURE(row.year);
      CAPTURE(row.group);
      GroupStats s = compute_stats(group_counts(), row.year, row.group);
      CHECK(s.label_counts == row.counts);
      CHECK(s.label_total == row.total);
      CHECK(s.label_total >= s.comment_total);
    }
    GroupStats g = compute_stats(group_counts(), 2022, "G1");
    CHECK(g.count(Category::kPresentation) == 57);
    CHECK(g.count(Category::kShortDescription) == 50);
    CHECK(g.count(Category::kEnhancementRequest) == 53);
    CHECK(g.comment_total == 264);
  }

  TEST_CASE("yearly totals") {
    CHECK(yearly_comment_totals(group_counts()) == std::map<int, std::size_t>{{2020, 171}, {2021, 117}, {2022, 264}});
    Corpus only2020;
    std::vector<InspectionComment> keep;
    for (const auto& [id, c] : group_counts().comments()) {
      if (c.year == 2020) keep.push_back(c);
    }
    only2020.ingest(keep);
    CHECK(yearly_comment_totals(only2020) == std::map<int, std::size_t>{{2020, 171}});
    CHECK(yearly_comment_totals(Corpus{}).empty());
  }

  TEST_CASE("shares come from summing the group row") {
    std::size_t sum = 0;
    for (auto n : kGroupCounts[0].counts) sum += n;
    GroupStats g = compute_stats(group_counts(), 2022, "G1");
    CHECK(g.share(Category::kPresentation) == doctest::Approx(57.0 / double(sum)));
    CHECK(g.share(Category::kPresentation) == doctest::Approx(0.2119).epsilon(1e-3));
    auto series = percentage_chart_data(group_counts());
    REQUIRE(series.size() == 4);
    CHECK(series[1].year == 2021);
    CHECK(series[1].values[index_of(Category::kEnhancementRequest)].second == doctest::Approx(33.0 / 123.0));
    CHECK(series[3].group == "G2");
  }

  TEST_CASE("presentation share in every group stays near the reported level") {
    for (const auto& s : compute_all_stats(group_counts())) {
      CHECK(s.share(Category::kPresentation) >= 0.10);
      CHECK(s.share(Category::kPresentation) <= 0.25);
    }
  }

  TEST_CASE("empty and unlabelled groups") {
    GroupStats e = compute_stats(Corpus{}, 2022, "G1");
    CHECK(e.label_total == 0);
    CHECK(e.comment_total == 0);
    CHECK_FALSE(e.has_percentages());
    CHECK(compute_all_stats(Corpus{}).empty());

    Corpus c;
    c.ingest({bare("a", 2022, "G1"), bare("b", 2022, "G1")});
    c.assign_labels("a", {Category::kFormat}, Labeler::human("x"));
    GroupStats s = compute_stats(c, 2022, "G1");
    CHECK(s.comment_total == 2);
    CHECK(s.labelled_comments == 1);
    CHECK(s.share(Category::kFormat) == 1.0);
  }

  TEST_CASE("trend flags") {
    auto stats = std::vector<GroupStats>{compute_stats(group_counts(), 2022, "G1")};
    auto flags = trend_flags(stats, {{Category::kPresentation, 0.15}});
    REQUIRE(flags.size() == 1);
    CHECK(flags[0].share == doctest::Approx(57.0 / 269.0));
    CHECK(flags[0].message.find("spelling") != std::string::npos);
    CHECK(trend_flags(stats, {{Category::kPresentation, 0.5}}).empty());
    CHECK(trend_flags({}, default_trend_rules()).empty());
    CHECK_THROWS_AS(trend_flags(stats, {{Category::kPresentation, 1.5}}), InvalidArgument);
    CHECK(advice_for(Category::kInconsistent).find("past documents") != std::string::npos);
  }

  TEST_CASE("property: single-label corpora have equal label and comment totals") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
      Corpus c;
      std::size_t n = rng() % 40;
      std::vector<InspectionComment> batch;
      for (std::size_t i = 0; i < n; ++i) batch.push_back(bare("c" + std::to_string(i), 2021, "G1"));
      c.ingest(batch);
      std::array<std::size_t, kCategoryCount> oracle{};
      for (const auto& b : batch) {
        std::size_t k = rng() % kCategoryCount;
        ++oracle[k];
        c.assign_labels(b.id, {category_at(k)}, Labeler::human("x"));
      }
      GroupStats s = compute_stats(c, 2021, "G1");
      REQUIRE(s.label_total == s.comment_total);
      REQUIRE(s.label_counts == oracle);
    }
  }

  TEST_CASE("property: stats ignore insertion order") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 5; ++trial) {
      Corpus shuffled = rebuild_shuffled(group_counts(), rng);
      for (const auto& row : kGroupCounts) REQUIRE(compute_stats(shuffled, row.year, row.group).label_counts == row.counts);
    }
  }

  TEST_CASE("property: disjoint corpora add slug-wise") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
      Corpus a, b, merged;
      for (int side = 0; side < 2; ++side) {
        Corpus& target = side ? b : a;
        std::size_t n = rng() % 20;
        for (std::size_t i = 0; i < n; ++i) {
          auto c = bare((side ? "b" : "a") + std::to_string(i), 2020, "G2");
          LabelSet l = LabelSet::from_mask(static_cast<std::uint16_t>(rng() % 8192));
          target.ingest({c});
          merged.ingest({c});
          if (!l.empty()) {
            target.assign_labels(c.id, l, Labeler::human("x"));
            merged.assign_labels(c.id, l, Labeler::human("x"));
          }
        }
      }
      auto sa = compute_stats(a, 2020, "G2"), sb = compute_stats(b, 2020, "G2");
      auto sm = compute_stats(merged, 2020, "G2");
      for (std::size_t k = 0; k < kCategoryCount; ++k) REQUIRE(sm.label_counts[k] == sa.label_counts[k] + sb.label_counts[k]);
      REQUIRE(sm.comment_total == sa.comment_total + sb.comment_total);
    }
  }

  TEST_CASE("parallel label counting equals serial") {
    std::mt19937_64 rng(21);
    std::vector<std::uint16_t> masks(100000);
    for (auto& m : masks) m = static_cast<std::uint16_t>(rng() % 8192);
    CHECK(kernels::count_labels_serial(masks) == kernels::count_labels_parallel(masks));
    CHECK(kernels::count_labels_serial({}) == kernels::LabelCounts{});
  }
}

TEST_SUITE("charts") {
  TEST_CASE("json forms") {
    auto stats = nlohmann::json::parse(stats_to_json(compute_all_stats(group_counts())));
    REQUIRE(stats.size() == 4);
    CHECK(stats[0]["comment_total"] == 264);
    CHECK(stats[0]["label_counts"]["presentation"] == 57);
    auto empty = nlohmann::json::parse(stats_to_json({compute_stats(Corpus{}, 2022, "G1")}));
    CHECK(empty[0]["percentages"].empty());
    auto chart = nlohmann::json::parse(chart_to_json(percentage_chart_data(group_counts())));
    CHECK(chart[0]["key"] == "2022G1");
    CHECK(chart[0]["values"].size() == 13);
  }

  TEST_CASE("svg chart has one bar per category and series") {
    std::string svg = render_svg_bar_chart(percentage_chart_data(group_counts()));
    CHECK(svg.rfind("<svg", 0) == 0);
    std::size_t bars = 0;
    for (auto p = svg.find("%</title></rect>"); p != std::string::npos; p = svg.find("%</title></rect>", p + 1)) ++bars;
    CHECK(bars == 52);
    CHECK(render_svg_bar_chart(percentage_chart_data(group_counts())) == svg);
  }

  TEST_CASE("text table") {
    std::string t = format_stats_table(compute_all_stats(group_counts()));
    CHECK(t.find("2022G1") != std::string::npos);
    CHECK(format_group_detail(compute_stats(group_counts(), 2022, "G1")).find("presentation=57") != std::string::npos);
  }
}
