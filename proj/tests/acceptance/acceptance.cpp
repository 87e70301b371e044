// Acceptance checks for the headline guarantees. Prints one PASS/FAIL line
// per check and exits non-zero if any check fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "inspectkit/analytics/stats.hpp"
#include "inspectkit/bridge/pin.hpp"
#include "inspectkit/bridge/publisher.hpp"
#include "inspectkit/bridge/sync.hpp"
#include "inspectkit/classifier/evaluate.hpp"
#include "inspectkit/classifier/model.hpp"
#include "inspectkit/corpus/corpus_csv.hpp"
#include "test_support.hpp"

using namespace inspectkit;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Collects failure reasons; the first one becomes the reported detail.
class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && first_failure_.empty()) first_failure_ = what;
  }
  Outcome done(std::string detail) const {
    if (first_failure_.empty()) return {true, std::move(detail)};
    return {false, first_failure_};
  }

 private:
  std::string first_failure_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

const fs::path kGroupCounts = testing::fixture_dir() / "group_counts" / "comments.csv";

struct Row {
  int year;
  const char* group;
  std::array<std::size_t, kCategoryCount> counts;
};

const std::array<Row, 4> kPublished{{
    {2022, "G1", {50, 13, 22, 6, 3, 10, 24, 22, 1, 2, 57, 53, 6}},
    {2021, "G1", {3, 2, 8, 6, 0, 8, 22, 18, 2, 0, 21, 33, 0}},
    {2020, "G1", {14, 0, 8, 8, 0, 11, 21, 13, 2, 1, 11, 19, 2}},
    {2020, "G2", {14, 1, 2, 3, 2, 6, 12, 6, 0, 0, 12, 27, 0}},
}};

// ---------------------------------------------------------------------------

Outcome table_reproduction() {
  Check check;
  auto t0 = Clock::now();
  Corpus corpus = import_csv(kGroupCounts);
  auto all = compute_all_stats(corpus);
  auto yearly = yearly_comment_totals(corpus);
  double elapsed = seconds_since(t0);
  check.require(all.size() == 4, "expected 4 groups, got " + std::to_string(all.size()));
  std::size_t cells = 0;
  for (const auto& row : kPublished) {
    GroupStats s = compute_stats(corpus, row.year, row.group);
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      bool ok = s.label_counts[c] == row.counts[c];
      cells += ok;
      check.require(ok, std::to_string(row.year) + row.group + " " + std::string(slug(category_at(c))) + "=" +
                            std::to_string(s.label_counts[c]) + ", expected " + std::to_string(row.counts[c]));
    }
  }
  check.require(yearly == std::map<int, std::size_t>{{2020, 171}, {2021, 117}, {2022, 264}},
                "yearly totals differ");
  check.require(elapsed < 1.0, "took " + fixed(elapsed) + " s");
  return check.done(std::to_string(cells) + "/52 counts, yearly 2022=" + std::to_string(yearly[2022]) +
                    " 2021=" + std::to_string(yearly[2021]) + " 2020=" + std::to_string(yearly[2020]) + ", " +
                    fixed(elapsed, 3) + " s");
}

Outcome multi_label_consistency() {
  Check check;
  Corpus corpus = import_csv(kGroupCounts);
  std::string detail;
  for (const auto& s : compute_all_stats(corpus)) {
    std::string key = std::to_string(s.year) + s.group;
    check.require(s.label_total >= s.comment_total, key + ": label_total " + std::to_string(s.label_total) +
                                                        " < comment_total " + std::to_string(s.comment_total));
    detail += (detail.empty() ? "" : ", ") + key + " " + std::to_string(s.label_total) +
              ">=" + std::to_string(s.comment_total);
  }
  return check.done(detail);
}

Outcome presentation_share() {
  Check check;
  Corpus corpus = import_csv(kGroupCounts);
  std::string detail;
  for (const auto& s : compute_all_stats(corpus)) {
    double p = s.share(Category::kPresentation);
    std::string key = std::to_string(s.year) + s.group;
    check.require(p >= 0.10 && p <= 0.25, key + " presentation share " + fixed(p) + " outside [0.10, 0.25]");
    detail += (detail.empty() ? "" : ", ") + key + "=" + fixed(p);
  }
  return check.done(detail);
}

Outcome sync_idempotence() {
  Check check;
  auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t total_comments = 0, total_injected = 0;
  const Timestamp base = *parse_iso8601("2022-06-01T00:00:00Z");
  for (int project = 0; project < 100; ++project) {
    MemoryDesignTool design;
    MemoryCodeHost host;
    git::MemoryObjectStore store;
    host.add_pull_request("team/docs", 1);
    const int frames = 1 + static_cast<int>(rng() % 3);
    for (int f = 0; f < frames; ++f) {
      design.add_frame("p", "f" + std::to_string(f), Image(16 + rng() % 300, 16 + rng() % 300));
    }
    std::size_t n = 1 + rng() % 50, missing = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::string frame = "f" + std::to_string(rng() % frames);
      if (rng() % 12 == 0) {
        frame = "deleted-frame";
        ++missing;
      }
      std::optional<std::string> parent;
      if (i > 0 && rng() % 5 == 0) parent = std::to_string(rng() % i);
      double x = static_cast<double>(rng() % 500) - 100, y = static_cast<double>(rng() % 500) - 100;
      design.add_comment("p", {std::to_string(i), frame, x, y, testing::random_body(rng),
                               base + std::chrono::seconds(i), parent});
    }
    // Deleted frames fail on every run, so a rerun must post nothing.
    std::string tag = "project " + std::to_string(project) + ": ";
    SyncReport first = sync("p", "team/docs", 1, design, host, store);
    SyncReport second = sync("p", "team/docs", 1, design, host, store);
    check.require(first.fetched == n, tag + "fetched " + std::to_string(first.fetched));
    check.require(first.posted_comments == n - missing,
                  tag + "first sync posted " + std::to_string(first.posted_comments) + ", expected " +
                      std::to_string(n - missing));
    check.require(second.posted_comments == 0, tag + "second sync posted " + std::to_string(second.posted_comments));
    check.require(first.balanced() && second.balanced(), tag + "report not balanced");
    check.require(host.list_comments("team/docs", 1).size() == n - missing, tag + "duplicate PR comments");
    std::size_t injected = missing;

    // Transient post failures on a fresh pull request: the next run retries
    // exactly those, the one after posts nothing.
    if (project % 4 == 0) {
      host.add_pull_request("team/docs", 2);
      int post_failures = 1 + static_cast<int>(rng() % 3);
      std::size_t transient = std::min<std::size_t>(post_failures, n - missing);
      host.fail_next_posts(post_failures);
      SyncReport a = sync("p", "team/docs", 2, design, host, store);
      host.fail_next_posts(0);
      SyncReport b = sync("p", "team/docs", 2, design, host, store);
      SyncReport c = sync("p", "team/docs", 2, design, host, store);
      check.require(a.posted_comments == n - missing - transient, tag + "transient run posted wrong count");
      check.require(b.posted_comments == transient, tag + "retry run posted wrong count");
      check.require(c.posted_comments == 0, tag + "third run posted " + std::to_string(c.posted_comments));
      injected += transient;
    }
    total_comments += n;
    total_injected += injected;
  }
  double elapsed = seconds_since(t0);
  check.require(elapsed < 10.0, "took " + fixed(elapsed) + " s");
  return check.done("100 projects, " + std::to_string(total_comments) + " comments, " +
                    std::to_string(total_injected) + " injected failures, second sync posts 0, " + fixed(elapsed, 2) +
                    " s");
}

Outcome git_publishing() {
  Check check;
  auto t0 = Clock::now();
  std::mt19937_64 rng(777);
  git::MemoryObjectStore store;
  const std::size_t n = 200;
  const Timestamp when = *parse_iso8601("2022-07-01T00:00:00Z");
  std::vector<std::pair<std::string, std::string>> published;  // path, bytes
  std::size_t next = 0, conflicts = 0;

  auto publish_next = [&](git::ObjectStore& s) {
    std::string path = "images/pr" + std::to_string(next % 7) + "/" + std::to_string(next) + ".png";
    std::string bytes = testing::random_bytes(rng, 1 + rng() % 2048);
    published.emplace_back(path, bytes);
    ++next;
    return publish_image(s, kDefaultImageRef, path, bytes, "publish " + path, when);
  };

  while (next < n) {
    // A concurrent writer publishes one of the n images between our read and
    // our ref update.
    if (next + 1 < n && rng() % 3 == 0) {
      store.inject_before_cas([&] { publish_next(store); });
      ++conflicts;
    }
    PublishResult r = publish_next(store);
    check.require(r.attempts <= 2, "publish needed " + std::to_string(r.attempts) + " attempts");
  }

  auto head = store.read_ref(kDefaultImageRef);
  check.require(head.has_value(), "image ref missing");
  if (!head) return check.done("");
  auto history = git::first_parent_history(store, *head);
  check.require(history.size() == n, "history has " + std::to_string(history.size()) + " commits");
  std::size_t resolvable = 0;
  std::function<bool(const git::ObjectId&)> walk = [&](const git::ObjectId& tree) {
    for (const auto& e : store.read_tree(tree)) {
      if (e.is_tree() ? !walk(e.id) : !store.contains(e.id)) return false;
    }
    return true;
  };
  for (const auto& c : history) resolvable += walk(store.read_commit(c).tree);
  check.require(resolvable == n, std::to_string(n - resolvable) + " trees not resolvable");
  auto final_tree = store.read_commit(*head).tree;
  std::size_t exact = 0;
  for (const auto& [path, bytes] : published) {
    auto oracle = git::ObjectId::from_hex(testing::oracle_object_hex("blob", bytes));
    bool ok = oracle && store.read_blob(*oracle) == bytes && git::lookup_path(store, final_tree, path) == oracle;
    exact += ok;
  }
  check.require(exact == n, std::to_string(n - exact) + " blobs not retrievable by oracle digest");
  double elapsed = seconds_since(t0);
  check.require(elapsed < 5.0, "took " + fixed(elapsed) + " s");
  return check.done(std::to_string(n) + " publishes, " + std::to_string(conflicts) + " injected conflicts, " +
                    std::to_string(history.size()) + " commits, " + std::to_string(exact) + " blobs bit-exact, " +
                    fixed(elapsed, 2) + " s");
}

int oracle_clamp(double v, int extent) {
  if (!(v >= 0)) return 0;
  if (v >= extent) return extent - 1;
  return static_cast<int>(std::floor(v));
}

Outcome pin_rendering() {
  Check check;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> coord(-500, 1500);
  std::size_t clamped = 0;
  for (int i = 0; i < 1000; ++i) {
    int w = 1 + static_cast<int>(rng() % 800), h = 1 + static_cast<int>(rng() % 800);
    double x = coord(rng), y = coord(rng);
    if (i % 2 == 0) {
      x = std::uniform_real_distribution<double>(0, w)(rng);
      y = std::uniform_real_distribution<double>(0, h)(rng);
    }
    if (i % 97 == 0) x = std::nan("");
    Image frame(w, h, {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), 128, 255});
    int index = 1 + static_cast<int>(rng() % 99);
    RenderedPinImage a = render_pin(frame, x, y, index);
    RenderedPinImage b = render_pin(frame, x, y, index);
    PinCenter want{oracle_clamp(x, w), oracle_clamp(y, h)};
    std::string tag = "case " + std::to_string(i) + ": ";
    check.require(a.pin_center == want, tag + "clamped to wrong pixel");
    check.require(a.pixels.at(want.x, want.y) == PinStyle::kFill, tag + "centre pixel is not the fill colour");
    check.require(a.png == b.png, tag + "PNG bytes differ between renders");
    check.require(decode_png(a.png) == a.pixels, tag + "PNG does not decode to the rendered pixels");
    clamped += a.clamped;
  }
  return check.done("1000 frames (" + std::to_string(clamped) + " clamped), centre colour, clamping, identical PNGs");
}

Outcome csv_round_trip() {
  Check check;
  std::mt19937_64 rng(1000);
  std::size_t rows = 0, cjk = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Corpus c = testing::random_corpus(rng, 20);
    std::string first = export_csv_text(c);
    std::string second = export_csv_text(import_csv_text(first));
    check.require(first == second, "corpus " + std::to_string(trial) + " changed on round trip");
    rows += c.size();
    cjk += first.find("画面") != std::string::npos;
  }
  return check.done("1000 corpora, " + std::to_string(rows) + " rows (" + std::to_string(cjk) +
                    " with CJK), byte-identical");
}

Outcome classifier_properties() {
  Check check;
  static const std::array<const char*, kCategoryCount> keywords = {
      "terse", "undefined", "wrongly", "unclear", "duplicate", "mismatch", "rough",
      "why",   "omitted",   "bounds",  "typo",    "wish",      "indent"};
  static const std::array<const char*, 7> filler = {"the", "screen", "table", "please", "check", "this", "page"};
  std::mt19937_64 rng(31337);
  std::vector<TrainingExample> data;
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    for (int i = 0; i < 20; ++i) {
      std::string text = keywords[c];
      for (int w = 0; w < 3; ++w) text += std::string(" ") + filler[rng() % filler.size()];
      data.push_back({tokenize(text), {category_at(c)}});
    }
  }
  EvaluationReport report = evaluate(data, 5);
  check.require(report.macro_f1 >= 0.9, "macro-F1 " + fixed(report.macro_f1) + " < 0.9");

  MultiLabelModel model = train(data, "acceptance");
  std::size_t empty = 0;
  for (int i = 0; i < 10000; ++i) {
    InspectionComment c;
    c.id = "r" + std::to_string(i);
    c.body = testing::random_body(rng);
    c.location = CodeHostLocation{"r/x", 1, std::nullopt};
    empty += predict(model, c).labels.empty();
  }
  check.require(empty == 0, std::to_string(empty) + " empty predictions");

  std::vector<TrainingExample> shuffled = data;
  bool invariant = true;
  for (int trial = 0; trial < 10 && invariant; ++trial) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    invariant = train(shuffled, "acceptance").same_parameters(model);
  }
  check.require(invariant, "training order changed the model");
  return check.done("macro-F1 " + fixed(report.macro_f1) + " (13x20, 5-fold), 10000 random texts non-empty, " +
                    "order invariant over 10 shuffles");
}

int run_cli(const std::vector<std::string>& args, const fs::path& log) {
  std::string cmd = INSPECTKIT_CLI_PATH;
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >>'" + log.string() + "' 2>&1 </dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_pipeline() {
  Check check;
  testing::TempDir tmp;
  fs::copy(testing::fixture_dir() / "sample", tmp / "fx", fs::copy_options::recursive);
  const std::string corpus = (tmp / "corpus").string();
  const fs::path log = tmp / "cli.log";
  // Labelled history the classifier can learn from.
  int seeded = run_cli({"--corpus", corpus, "import", kGroupCounts.string()}, log);
  check.require(seeded == 0, "seeding the corpus failed");

  const std::string synced = design_comment_id("demo", "1001");
  const std::vector<std::pair<std::string, std::vector<std::string>>> steps = {
      {"sync",
       {"--corpus", corpus, "--fixtures", (tmp / "fx").string(), "sync", "--project", "demo", "--repo",
        "pbl2022-g1/documents", "--pr", "7", "--group", "G9"}},
      {"export", {"--corpus", corpus, "export", "--out", (tmp / "export.csv").string()}},
      {"stats", {"--corpus", corpus, "stats", "--svg", (tmp / "chart.svg").string()}},
      {"train", {"--corpus", corpus, "train", "--version", "acceptance"}},
      {"suggest", {"--corpus", corpus, "suggest", synced}},
  };
  auto t0 = Clock::now();
  std::string codes;
  for (const auto& [name, args] : steps) {
    int code = run_cli(args, log);
    codes += (codes.empty() ? "" : " ") + name + "=" + std::to_string(code);
    check.require(code == 0, name + " exited " + std::to_string(code) + "; log:\n" + testing::read_file(log));
  }
  std::string exported = testing::read_file(tmp / "export.csv");
  check.require(exported.find(synced + ",") != std::string::npos, "synced comment missing from export");
  check.require(fs::exists(tmp / "chart.svg"), "chart not written");
  std::string out = testing::read_file(log);
  check.require(out.find("posted=3") != std::string::npos, "sync did not post 3 comments");
  return check.done(codes + ", fixtures only, " + fixed(seconds_since(t0), 2) + " s");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"group-count-reproduction", table_reproduction},
      {"multi-label-consistency", multi_label_consistency},
      {"presentation-share", presentation_share},
      {"sync-idempotence", sync_idempotence},
      {"git-publishing-conformance", git_publishing},
      {"pin-rendering", pin_rendering},
      {"csv-round-trip", csv_round_trip},
      {"classifier-properties", classifier_properties},
      {"cli-pipeline-offline", cli_pipeline},
  };
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
