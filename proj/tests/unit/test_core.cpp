#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "inspectkit/core/comment.hpp"
#include "inspectkit/core/error.hpp"
#include "inspectkit/core/labels.hpp"
#include "inspectkit/core/taxonomy.hpp"
#include "inspectkit/core/timestamp.hpp"

using namespace inspectkit;

namespace {

InspectionComment code_comment(std::string id, std::string body = "fix the heading") {
  InspectionComment c;
  c.id = std::move(id);
  c.source = CommentSource::kCodeHost;
  c.year = 2022;
  c.group = "G1";
  c.body = std::move(body);
  c.location = CodeHostLocation{"team/docs", 3, std::nullopt};
  return c;
}

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_SUITE("taxonomy") {
  TEST_CASE("thirteen categories in table order with published definitions") {
    const auto& t = taxonomy();
    REQUIRE(t.size() == 13);
    CHECK(t[0].slug == "short-description");
    CHECK(t[0].definition == "Lack of description");
    CHECK(t[10].slug == "presentation");
    CHECK(t[10].definition == "Inappropriately worded");
    CHECK(t[5].definition == "Inconsistency among deliverables");
    CHECK(t[12].slug == "format");
    CHECK(t[12].definition == "Document formatting deficiencies");

    std::set<std::string_view> slugs;
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(index_of(t[i].category) == i);
      slugs.insert(t[i].slug);
      CHECK(parse_category(t[i].slug) == t[i].category);
    }
    CHECK(slugs.size() == 13);
    CHECK_FALSE(parse_category("speling"));
  }

  TEST_CASE("taxonomy is stable across calls") {
    CHECK(&taxonomy() == &taxonomy());
    CHECK(taxonomy()[3].slug == "understandability");
  }

  TEST_CASE("artifact kinds") {
    CHECK(artifact_kinds().size() == 7);
    CHECK(slug(ArtifactKind::kScreenTransition) == "screen-transition");
    CHECK(notation(ArtifactKind::kScreenTransition) == "figma");
    CHECK(notation(ArtifactKind::kClassDiagram) == "plant UML");
    CHECK(parse_artifact_kind("statechart") == ArtifactKind::kStatechart);
    CHECK_FALSE(parse_artifact_kind("plan"));
    CHECK(artifact_from_path("docs/sequence-diagram.pu") == ArtifactKind::kSequenceDiagram);
    CHECK(artifact_from_path("README.md") == ArtifactKind::kOther);
  }
}

TEST_SUITE("labels") {
  TEST_CASE("label set joins in taxonomy order regardless of insertion") {
    LabelSet a{Category::kFormat, Category::kMistake};
    LabelSet b{Category::kMistake, Category::kFormat};
    CHECK(a == b);
    CHECK(a.join() == "mistake;format");
    CHECK(LabelSet::parse("format;mistake") == a);
    CHECK(LabelSet::parse("").empty());
    CHECK_THROWS_WITH_AS(LabelSet::parse("speling"), "unknown label: speling", InvalidArgument);
  }

  TEST_CASE("mask round trip for every subset") {
    for (std::uint16_t m = 0; m < (1u << 13); ++m) {
      LabelSet s = LabelSet::from_mask(m);
      REQUIRE(s.mask() == m);
      REQUIRE(LabelSet::parse(s.join()) == s);
    }
  }

  TEST_CASE("labeler string forms") {
    CHECK(Labeler::human("alice").to_string() == "human:alice");
    CHECK(Labeler::rule_baseline().to_string() == "rule-baseline");
    CHECK(Labeler::model("v1").to_string() == "ml-model:v1");
    for (const char* s : {"human:alice", "rule-baseline", "ml-model:v3"}) {
      CHECK(Labeler::parse(s).to_string() == s);
    }
    CHECK_THROWS_AS(Labeler::parse("robot"), InvalidArgument);
  }

  TEST_CASE("human assignment takes precedence over a later machine assignment") {
    LabelLog log;
    log.append({"c1", {Category::kMistake, Category::kFormat}, Labeler::human("alice"), {}, {}});
    log.append({"c1", {Category::kPresentation}, Labeler::model("v1"), {}, {}});
    CHECK(log.effective_labels("c1") == LabelSet{Category::kMistake, Category::kFormat});
    CHECK_FALSE(log.effective_labels("c2"));
    CHECK_THROWS_WITH(log.append({"c1", {}, Labeler::human("alice"), {}, {}}), "empty label set");
  }

  TEST_CASE("property: effective labels follow latest human, else latest machine") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
      LabelLog log;
      std::optional<LabelSet> last_human, last_machine;
      int n = 1 + static_cast<int>(rng() % 12);
      for (int i = 0; i < n; ++i) {
        LabelSet s = LabelSet::from_mask(static_cast<std::uint16_t>(1 + rng() % 8191));
        Labeler who;
        switch (rng() % 4) {
          case 0: who = Labeler::human("a"); break;
          case 1: who = Labeler::human("b"); break;
          case 2: who = Labeler::rule_baseline(); break;
          default: who = Labeler::model("v" + std::to_string(rng() % 2)); break;
        }
        (who.is_human() ? last_human : last_machine) = s;
        log.append({"c", s, who, {}, {}});
      }
      auto expected = last_human ? last_human : last_machine;
      REQUIRE(log.effective_labels("c") == expected);
    }
  }
}

TEST_SUITE("comment validation") {
  TEST_CASE("well-formed comment has no violations") {
    CHECK(validate_comment(code_comment("c1")).empty());
  }

  TEST_CASE("blank body") {
    CHECK(has(validate_comment(code_comment("c1", "")), "empty body"));
    CHECK(has(validate_comment(code_comment("c1", " \t\n ")), "empty body"));
  }

  TEST_CASE("location must match source") {
    auto c = code_comment("c1");
    c.source = CommentSource::kDesignTool;
    CHECK(has(validate_comment(c), "location/source mismatch"));
  }

  TEST_CASE("coordinates outside the frame are allowed, non-finite are not") {
    InspectionComment c = code_comment("d1");
    c.source = CommentSource::kDesignTool;
    c.location = DesignLocation{"p", "f", -40, 1e6};
    CHECK(validate_comment(c).empty());
    c.location = DesignLocation{"p", "f", std::nan(""), 0};
    CHECK(has(validate_comment(c), "non-finite coordinate"));
  }

  TEST_CASE("parent must exist and share the source") {
    auto parent = code_comment("p");
    auto child = code_comment("c");
    child.parent_id = "p";
    CommentLookup none = [](const std::string&) -> const InspectionComment* { return nullptr; };
    CHECK(has(validate_comment(child, none), "unknown parent p"));
    CommentLookup found = [&](const std::string&) -> const InspectionComment* { return &parent; };
    CHECK(validate_comment(child, found).empty());
    parent.source = CommentSource::kDesignTool;
    CHECK(has(validate_comment(child, found), "parent source mismatch"));
  }
}

TEST_SUITE("timestamp") {
  TEST_CASE("iso8601 forms") {
    auto t = parse_iso8601("2022-06-14T01:20:00Z");
    REQUIRE(t);
    CHECK(format_iso8601(*t) == "2022-06-14T01:20:00Z");
    CHECK(parse_iso8601("2022-06-14T10:20:00+09:00") == t);
    CHECK(parse_iso8601("2022-06-14T01:20:00.750Z") == t);
    CHECK(utc_year(*t) == 2022);
    CHECK_FALSE(parse_iso8601("2022-13-01T00:00:00Z"));
    CHECK_FALSE(parse_iso8601("yesterday"));
  }
}
