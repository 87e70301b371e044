#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "inspectkit/classifier/evaluate.hpp"
#include "inspectkit/classifier/model.hpp"
#include "inspectkit/classifier/rules.hpp"
#include "inspectkit/classifier/tokenizer.hpp"
#include "inspectkit/core/error.hpp"
#include "inspectkit/corpus/corpus.hpp"
#include "inspectkit/kernels/score_batch.hpp"
#include "test_support.hpp"

using namespace inspectkit;

namespace {

TrainingExample ex(std::string_view text, LabelSet labels) { return {tokenize(text), labels}; }

std::vector<TrainingExample> tiny_corpus() {
  return {ex("typo here in title", {Category::kPresentation}),
          ex("typo in the label", {Category::kPresentation}),
          ex("missing rationale for design", {Category::kRationale}),
          ex("table layout is broken", {Category::kFormat})};
}

InspectionComment comment_with(std::string body) {
  InspectionComment c;
  c.id = "q";
  c.year = 2022;
  c.group = "G1";
  c.body = std::move(body);
  c.location = CodeHostLocation{"r/x", 1, std::nullopt};
  return c;
}

// One keyword per category plus shared filler, so each document's category is
// recoverable from its keyword alone.
const std::vector<std::string> kKeywords = {"terse",   "undefined", "wrongly", "unclear", "duplicate",
                                            "mismatch", "rough",    "why",     "omitted", "bounds",
                                            "typo",    "wish",      "indent"};
const std::vector<std::string> kFiller = {"the", "screen", "table", "please", "check", "this", "page"};

std::vector<TrainingExample> separable(std::mt19937_64& rng, std::size_t per_category) {
  std::vector<TrainingExample> out;
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    for (std::size_t i = 0; i < per_category; ++i) {
      std::string text = kKeywords[c];
      for (int w = 0; w < 3; ++w) text += " " + kFiller[rng() % kFiller.size()];
      out.push_back(ex(text, {category_at(c)}));
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("tokenizer") {
  TEST_CASE("ascii words are lowercased") {
    TokenVector t = tokenize("Typo in Header");
    CHECK(t == TokenVector{{"header", 1}, {"in", 1}, {"typo", 1}});
    CHECK(tokenize("fix, fix; FIX")["fix"] == 3);
  }

  TEST_CASE("cjk runs become bigrams") {
    CHECK(tokenize("画面遷移") == TokenVector{{"画面", 1}, {"遷移", 1}, {"面遷", 1}});
    CHECK(tokenize("図 ok") == TokenVector{{"ok", 1}, {"図", 1}});
    CHECK(tokenize("ＴＹＰＯ") == TokenVector{{"typo", 1}});
  }

  TEST_CASE("blank text is rejected") {
    CHECK_THROWS_WITH_AS(tokenize(""), "empty text", InvalidArgument);
    CHECK_THROWS_AS(tokenize(" \n\t "), InvalidArgument);
  }

  TEST_CASE("invalid utf-8 does not throw") {
    std::string bad = "ok \xff\xfe done";
    CHECK(tokenize(bad).count("ok") == 1);
  }
}

TEST_SUITE("classifier") {
  TEST_CASE("scores on a four document corpus match hand-computed values") {
    // Exact rationals from a brute-force evaluation of the multinomial model.
    MultiLabelModel m = train(tiny_corpus(), "t");
    CategoryScores s = m.score(tokenize("typo here"));
    CHECK(s[index_of(Category::kPresentation)] == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
    CHECK(s[index_of(Category::kRationale)] == doctest::Approx(169.0 / 1627.0).epsilon(1e-12));
    CHECK(s[index_of(Category::kFormat)] == doctest::Approx(169.0 / 1627.0).epsilon(1e-12));
    CHECK(s[index_of(Category::kMistake)] == 0.0);
    CHECK(m.decide(s) == LabelSet{Category::kPresentation});
  }

  TEST_CASE("predict produces a model assignment") {
    MultiLabelModel m = train(tiny_corpus(), "v7");
    LabelAssignment a = predict(m, comment_with("typo here"));
    CHECK(a.labeler.to_string() == "ml-model:v7");
    CHECK(a.labels == LabelSet{Category::kPresentation});
    REQUIRE(a.scores);
    CHECK_THROWS_WITH_AS(predict(m, comment_with("  ")), "empty text", InvalidArgument);
  }

  TEST_CASE("categories without positives are never predicted") {
    MultiLabelModel m = train(tiny_corpus(), "t");
    CHECK(m.per_category[index_of(Category::kMistake)].kind == BinaryModel::Kind::kAlwaysNegative);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
      LabelSet got = predict(m, comment_with(testing::random_body(rng))).labels;
      REQUIRE_FALSE(got.empty());
      for (Category c : got.to_vector()) {
        REQUIRE(m.per_category[index_of(c)].positives > 0);
      }
    }
  }

  TEST_CASE("a category present on every example always fires") {
    std::vector<TrainingExample> all{ex("a b", {Category::kFormat}), ex("c d", {Category::kFormat})};
    MultiLabelModel m = train(all, "t");
    CHECK(m.per_category[index_of(Category::kFormat)].kind == BinaryModel::Kind::kAlwaysPositive);
    CHECK(m.decide(m.score(tokenize("zzz"))) == LabelSet{Category::kFormat});
  }

  TEST_CASE("training preconditions") {
    CHECK_THROWS_WITH_AS(train(std::vector<TrainingExample>{}, "t"), "empty corpus", InvalidArgument);
    CHECK_THROWS_AS(train(std::vector<TrainingExample>{ex("a", {})}, "t"), InvalidArgument);
    CHECK_NOTHROW(train(std::vector<TrainingExample>{ex("a", {Category::kFormat})}, "t"));
  }

  TEST_CASE("property: training is deterministic and order independent") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<TrainingExample> data;
      for (int i = 0; i < 30; ++i) {
        data.push_back(ex(testing::random_body(rng), LabelSet::from_mask(1 + rng() % 8191)));
      }
      MultiLabelModel a = train(data, "v");
      MultiLabelModel b = train(data, "v");
      std::shuffle(data.begin(), data.end(), rng);
      MultiLabelModel c = train(data, "v");
      REQUIRE(a.same_parameters(b));
      REQUIRE(a.same_parameters(c));
      TokenVector probe = tokenize(testing::random_body(rng));
      REQUIRE(a.score(probe) == c.score(probe));
    }
  }

  TEST_CASE("property: adding positive evidence never lowers the score") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 30; ++trial) {
      auto data = separable(rng, 3);
      std::size_t pick = rng() % kCategoryCount;
      const std::string& word = kKeywords[pick];
      Category cat = category_at(pick);
      MultiLabelModel before = train(data, "v");
      data.push_back(ex(word + " extra", {cat}));
      MultiLabelModel after = train(data, "v");
      TokenVector probe = tokenize(word);
      REQUIRE(after.score(probe)[index_of(cat)] >= before.score(probe)[index_of(cat)] - 1e-12);
    }
  }

  TEST_CASE("scores are probabilities") {
    std::mt19937_64 rng(8);
    MultiLabelModel m = train(separable(rng, 4), "v");
    for (int i = 0; i < 100; ++i) {
      for (double s : m.score(tokenize(testing::random_body(rng)))) {
        REQUIRE(std::isfinite(s));
        REQUIRE(s >= 0.0);
        REQUIRE(s <= 1.0);
      }
    }
    CHECK(sigmoid(1000) == 1.0);
    CHECK(sigmoid(-1000) == doctest::Approx(0.0));
    CHECK(sigmoid(0) == 0.5);
  }

  TEST_CASE("parallel scoring equals serial scoring") {
    std::mt19937_64 rng(17);
    MultiLabelModel m = train(separable(rng, 5), "v");
    std::vector<EncodedDoc> docs;
    for (int i = 0; i < 300; ++i) docs.push_back(m.encode(tokenize(testing::random_body(rng) + " typo why indent")));
    CHECK(kernels::score_batch_serial(m, docs) == kernels::score_batch_parallel(m, docs));
  }

  TEST_CASE("model json round trip") {
    MultiLabelModel m = train(tiny_corpus(), "v1");
    MultiLabelModel back = model_from_json(model_to_json(m));
    CHECK(back.same_parameters(m));
    CHECK(back.score(tokenize("typo here")) == m.score(tokenize("typo here")));
    CHECK(model_to_json(back) == model_to_json(m));
    CHECK_THROWS_AS(model_from_json("{}"), ParseError);
    CHECK_THROWS_AS(model_from_json("not json"), ParseError);
    testing::TempDir tmp;
    CHECK_THROWS_WITH_AS(load_model(tmp / "none.json"), "no model", NotFound);
    save_model(m, tmp / "m.json");
    CHECK(load_model(tmp / "m.json").same_parameters(m));
  }

  TEST_CASE("machine labels are not used for training") {
    Corpus corpus;
    auto a = comment_with("typo here");
    a.id = "a";
    auto b = comment_with("why this table");
    b.id = "b";
    corpus.ingest({a, b});
    corpus.assign_labels("a", {Category::kPresentation}, Labeler::human("x"));
    corpus.assign_labels("b", {Category::kRationale}, Labeler::model("v0"));
    auto examples = training_examples(corpus);
    REQUIRE(examples.size() == 1);
    CHECK(examples[0].labels == LabelSet{Category::kPresentation});
  }
}

TEST_SUITE("evaluation") {
  TEST_CASE("separable corpus scores high") {
    std::mt19937_64 rng(1);
    auto report = evaluate(separable(rng, 20), 5);
    CHECK(report.folds == 5);
    CHECK(report.documents == 260);
    CHECK(report.defined_categories == 13);
    CHECK(report.macro_f1 >= 0.9);
  }

  TEST_CASE("identical texts with conflicting labels score low") {
    std::vector<TrainingExample> data;
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      for (int i = 0; i < 20; ++i) data.push_back(ex("same words every time", {category_at(c)}));
    }
    CHECK(evaluate(data, 5).macro_f1 <= 0.6);
  }

  TEST_CASE("fold assignment is deterministic and balanced") {
    std::mt19937_64 rng(2);
    auto data = separable(rng, 4);
    auto folds = assign_folds(data, 5);
    CHECK(folds == assign_folds(data, 5));
    std::vector<int> sizes(5);
    for (auto f : folds) sizes.at(f)++;
    CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 2);
  }

  TEST_CASE("too few examples") {
    auto two = tiny_corpus();
    two.resize(2);
    CHECK_NOTHROW(evaluate(two, 2));
    CHECK_THROWS_WITH_AS(evaluate(two, 3), "corpus too small", InvalidArgument);
    CHECK_THROWS_AS(evaluate(two, 1), InvalidArgument);
  }

  TEST_CASE("metrics stay within bounds and counts add up") {
    std::mt19937_64 rng(3);
    std::vector<TrainingExample> data;
    for (int i = 0; i < 60; ++i) data.push_back(ex(testing::random_body(rng), LabelSet::from_mask(1 + rng() % 8191)));
    auto r = evaluate(data, 3);
    CHECK(r.macro_f1 >= 0);
    CHECK(r.macro_f1 <= 1);
    for (const auto& m : r.per_category) {
      CHECK(m.true_positives + m.false_negatives == m.support);
      if (m.f1) {
        CHECK(*m.f1 >= 0);
        CHECK(*m.f1 <= 1);
      }
    }
  }
}

TEST_SUITE("rule baseline") {
  TEST_CASE("keywords map to categories") {
    const auto& rules = KeywordRules::defaults();
    CHECK(rules.match("There is a typo in the title").contains(Category::kPresentation));
    CHECK(rule_baseline(comment_with("zzz qqq")).labels == LabelSet{Category::kEnhancementRequest});
    CHECK(rule_baseline(comment_with("zzz")).labeler.to_string() == "rule-baseline");
  }

  TEST_CASE("prefix and word-boundary matching") {
    KeywordRules r = KeywordRules::parse("format = [\"indent*\", \"font\"]\nmistake = [\"誤り\"]\n");
    CHECK(r.match("Indentation is off").contains(Category::kFormat));
    CHECK_FALSE(r.match("fontsize").contains(Category::kFormat));
    CHECK(r.match("この値は誤りです").contains(Category::kMistake));
  }

  TEST_CASE("parse errors name the line") {
    CHECK_THROWS_WITH_AS(KeywordRules::parse("# c\nformat = [\"a\"]\nnope = [\"b\"]\n"),
                         doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_AS(KeywordRules::parse("format = \"a\"\n"), ParseError);
  }

  TEST_CASE("text form round trips and the shipped file equals the defaults") {
    const auto& d = KeywordRules::defaults();
    CHECK(KeywordRules::parse(d.to_text()).keywords == d.keywords);
    CHECK(KeywordRules::load(testing::source_dir() / "config/rules.toml").keywords == d.keywords);
  }
}
