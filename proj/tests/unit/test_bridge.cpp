#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "inspectkit/bridge/marker.hpp"
#include "inspectkit/bridge/pin.hpp"
#include "inspectkit/bridge/raster.hpp"
#include "inspectkit/bridge/sync.hpp"
#include "inspectkit/core/error.hpp"
#include "inspectkit/kernels/pin_batch.hpp"
#include "test_support.hpp"

using namespace inspectkit;

namespace {

const Timestamp kT0 = *parse_iso8601("2022-06-14T01:20:00Z");

int oracle_clamp(double v, int extent) {
  if (!(v >= 0)) return 0;
  if (v >= extent) return extent - 1;
  return static_cast<int>(v);
}

std::size_t count_markers(const std::string& body) {
  std::size_t n = 0;
  for (auto pos = body.find(kMarkerToken); pos != std::string::npos; pos = body.find(kMarkerToken, pos + 1)) ++n;
  return n;
}

void copy_fixture(const std::filesystem::path& to) {
  std::filesystem::copy(testing::fixture_dir() / "sample", to, std::filesystem::copy_options::recursive);
}

const std::string kRepo = "pbl2022-g1/documents";

}  // namespace

TEST_SUITE("raster") {
  TEST_CASE("png encode and decode round trip") {
    Image img(7, 5, {10, 20, 30, 255});
    img.set(3, 2, {200, 100, 50, 128});
    std::string png = encode_png(img);
    CHECK(png.substr(1, 3) == "PNG");
    CHECK(decode_png(png) == img);
    CHECK(encode_png(img) == png);
    CHECK_THROWS_AS(decode_png("not a png"), ParseError);
    CHECK_THROWS_AS(Image(0, 3), InvalidArgument);
  }
}

TEST_SUITE("pin") {
  TEST_CASE("centre pixel carries the fill colour") {
    Image frame(100, 100);
    auto r = render_pin(frame, 50, 50, 1);
    CHECK(r.pixels.at(50, 50) == PinStyle::kFill);
    CHECK_FALSE(r.clamped);
    CHECK(r.pin_center == PinCenter{50, 50});
    CHECK(r.pixels.at(50 + PinStyle::kOuterRadius - 1, 50) == PinStyle::kBorder);
    CHECK(r.pixels.at(50 + PinStyle::kOuterRadius + 1, 50) == Rgba{255, 255, 255, 255});
    CHECK(r.pixels.at(0, 0) == frame.at(0, 0));
    CHECK(decode_png(r.png) == r.pixels);
  }

  TEST_CASE("out of bounds coordinates clamp to the edge") {
    Image frame(100, 100);
    auto r = render_pin(frame, 150, 50, 1);
    CHECK(r.pin_center == PinCenter{99, 50});
    CHECK(r.clamped);
    CHECK(r.pixels.at(99, 50) == PinStyle::kFill);
    auto n = render_pin(frame, std::nan(""), -3, 2);
    CHECK(n.pin_center == PinCenter{0, 0});
    CHECK(n.clamped);
  }

  TEST_CASE("the numeral is drawn inside the disc") {
    Image frame(60, 60);
    auto r = render_pin(frame, 30, 30, 7);
    std::size_t white = 0;
    for (int y = 18; y <= 42; ++y) {
      for (int x = 18; x <= 42; ++x) white += r.pixels.at(x, y) == PinStyle::kNumeral;
    }
    CHECK(white > 0);
    CHECK(render_pin(frame, 30, 30, 8).png != r.png);
  }

  TEST_CASE("rendering is deterministic") {
    Image frame(40, 30, {1, 2, 3, 255});
    CHECK(render_pin(frame, 10.7, 3.2, 12).png == render_pin(frame, 10.7, 3.2, 12).png);
  }

  TEST_CASE("preconditions") {
    CHECK_THROWS_AS(render_pin(Image{}, 0, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(render_pin(Image(3, 3), 0, 0, 0), InvalidArgument);
  }

  TEST_CASE("property: clamping and centre colour on random frames") {
    std::mt19937_64 rng(1000);
    std::uniform_real_distribution<double> coord(-300, 900);
    for (int i = 0; i < 400; ++i) {
      int w = 1 + static_cast<int>(rng() % 400);
      int h = 1 + static_cast<int>(rng() % 400);
      double x = coord(rng), y = coord(rng);
      Image frame(w, h, {static_cast<std::uint8_t>(rng()), 90, 90, 255});
      auto r = render_pin(frame, x, y, 1 + static_cast<int>(rng() % 60));
      PinCenter want{oracle_clamp(x, w), oracle_clamp(y, h)};
      bool outside = x < 0 || y < 0 || x >= w || y >= h;
      REQUIRE(r.pin_center == want);
      REQUIRE(r.clamped == outside);
      REQUIRE(r.pixels.at(want.x, want.y) == PinStyle::kFill);
    }
  }

  TEST_CASE("parallel batch equals serial batch") {
    std::mt19937_64 rng(3);
    std::vector<Image> frames;
    for (int i = 0; i < 5; ++i) frames.emplace_back(50 + i * 10, 40, Rgba{static_cast<std::uint8_t>(i * 40), 0, 0, 255});
    std::vector<kernels::PinJob> jobs;
    for (int i = 0; i < 40; ++i) {
      jobs.push_back({&frames[rng() % frames.size()], double(rng() % 120), double(rng() % 60), i + 1});
    }
    auto a = kernels::render_pins_serial(jobs);
    auto b = kernels::render_pins_parallel(jobs);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].png == b[i].png);
    jobs[7].index = 0;
    CHECK_THROWS_AS(kernels::render_pins_parallel(jobs), InvalidArgument);
  }
}

TEST_SUITE("marker") {
  SyncMarker sample() {
    SyncMarker m;
    m.remote_id = "1001";
    m.project_id = "demo project";
    m.frame_id = "12:34";
    m.x = 120.5;
    m.y = -3;
    m.created_at = kT0;
    m.image_path = "images/pr7/1001.png";
    return m;
  }

  TEST_CASE("marker line round trips and is an html comment") {
    SyncMarker m = sample();
    std::string line = encode_marker(m);
    CHECK(line.rfind("<!-- [marker] scenecommenter:figma-comment-id=1001 ", 0) == 0);
    CHECK(line.substr(line.size() - 4) == " -->");
    CHECK(decode_marker_line(line) == m);
    m.parent_remote_id = "99 x";
    CHECK(decode_marker_line(encode_marker(m)) == m);
  }

  TEST_CASE("composed comment holds text, image reference and one marker") {
    RelayedComment c{"Fix label", std::nullopt, 1, "images/pr7/c1.png", sample()};
    std::string body = compose_pr_comment(c);
    CHECK(body.find("Fix label") != std::string::npos);
    CHECK(body.find("(images/pr7/c1.png)") != std::string::npos);
    CHECK(count_markers(body) == 1);
    auto scan = scan_for_marker(body);
    CHECK(scan.status == MarkerScan::Status::kValid);
    CHECK(scan.marker == c.marker);
    CHECK(original_text_of(body, false) == std::optional<std::string>("Fix label"));
  }

  TEST_CASE("marker text inside the comment body is defused") {
    std::string sneaky = std::string("see ") + std::string(kMarkerToken) + "666 for details";
    RelayedComment c{sneaky, std::string("#1"), 2, "img.png", sample()};
    std::string body = compose_pr_comment(c);
    CHECK(count_markers(body) == 1);
    CHECK(scan_for_marker(body).marker->remote_id == "1001");
    CHECK(body.rfind("> reply to #1", 0) == 0);
  }

  TEST_CASE("malformed markers are reported with the id when readable") {
    auto scan = scan_for_marker("hello\n<!-- [marker] scenecommenter:figma-comment-id=77 x=oops -->");
    CHECK(scan.status == MarkerScan::Status::kMalformed);
    CHECK(scan.remote_id == std::optional<std::string>("77"));
    CHECK(scan_for_marker("plain comment").status == MarkerScan::Status::kNone);
  }

  TEST_CASE("percent encoding") {
    CHECK(percent_decode(percent_encode("a b%c=d\n画")) == std::optional<std::string>("a b%c=d\n画"));
    CHECK_FALSE(percent_decode("%zz"));
  }
}

TEST_SUITE("fixture transports") {
  TEST_CASE("design fixture keeps reply linkage and pairs frames") {
    FixtureDesignTool tool(testing::fixture_dir() / "sample");
    auto r = tool.fetch_comments("demo");
    REQUIRE(r.comments.size() == 3);
    CHECK(r.failures.empty());
    CHECK(r.comments[1].parent_remote_id == std::optional<std::string>("1001"));
    CHECK(r.comments[0].frame_image.width() == 320);
    CHECK_THROWS_AS(tool.fetch_comments("nope"), NotFound);
  }

  TEST_CASE("a comment without a frame image becomes a failure entry") {
    FixtureDesignTool tool(testing::fixture_dir() / "sample");
    auto r = tool.fetch_comments("partial");
    CHECK(r.comments.size() == 2);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0] == SyncFailure{"2002", "missing frame image"});
  }

  TEST_CASE("empty project and malformed payload") {
    testing::TempDir tmp;
    testing::write_file(tmp / "project/empty/comments.json", "[]");
    testing::write_file(tmp / "project/bad/comments.json", R"([{"remote_id":"x","frame_id":"f","x":"left"}])");
    FixtureDesignTool tool(tmp.path());
    CHECK(tool.fetch_comments("empty").comments.empty());
    CHECK_THROWS_WITH_AS(tool.fetch_comments("bad"), doctest::Contains("record 0 (x)"), ParseError);
    FixtureDesignTool gone(tmp / "missing");
    CHECK_THROWS_AS(gone.fetch_comments("empty"), TransportError);
  }

  TEST_CASE("posting to a missing pull request fails") {
    testing::TempDir tmp;
    copy_fixture(tmp / "fx");
    FixtureCodeHost host(tmp / "fx");
    CHECK_THROWS_WITH_AS(host.post_comment(kRepo, 999, "x", kT0), doctest::Contains("PR not found"), NotFound);
    std::string id = host.post_comment(kRepo, 7, "Fix label", kT0);
    auto listed = host.list_comments(kRepo, 7);
    REQUIRE(listed.size() == 1);
    CHECK(listed[0].id == id);
    CHECK(listed[0].body == "Fix label");
  }
}

TEST_SUITE("sync") {
  TEST_CASE("three comments into an empty pull request, then a rerun") {
    testing::TempDir tmp;
    copy_fixture(tmp / "fx");
    FixtureDesignTool design(tmp / "fx");
    FixtureCodeHost host(tmp / "fx");
    git::LooseObjectStore store(fixture_image_store_dir(tmp / "fx", kRepo));

    auto first = sync("demo", kRepo, 7, design, host, store);
    CHECK(first.fetched == 3);
    CHECK(first.posted_comments == 3);
    CHECK(first.published_images == 3);
    CHECK(first.skipped_duplicates == 0);
    CHECK(first.balanced());
    auto posted = host.list_comments(kRepo, 7);
    REQUIRE(posted.size() == 3);
    std::set<std::string> ids;
    for (const auto& pc : posted) {
      CHECK(count_markers(pc.body) == 1);
      ids.insert(scan_for_marker(pc.body).marker->remote_id);
    }
    CHECK(ids.size() == 3);
    CHECK(posted[1].body.rfind("> reply to #1", 0) == 0);

    auto head = store.read_ref(kDefaultImageRef);
    REQUIRE(head);
    auto tree = store.read_commit(*head).tree;
    auto blob = git::lookup_path(store, tree, "images/pr7/1003.png");
    REQUIRE(blob);
    auto pin = decode_png(store.read_blob(*blob));
    CHECK(pin.at(319, 0) == PinStyle::kFill);  // (410, -12) clamps to the top right corner

    auto second = sync("demo", kRepo, 7, design, host, store);
    CHECK(second.fetched == 3);
    CHECK(second.posted_comments == 0);
    CHECK(second.skipped_duplicates == 3);
    CHECK(host.list_comments(kRepo, 7).size() == 3);
    CHECK(store.read_ref(kDefaultImageRef) == head);
  }

  TEST_CASE("partial failure keeps going") {
    testing::TempDir tmp;
    copy_fixture(tmp / "fx");
    FixtureDesignTool design(tmp / "fx");
    FixtureCodeHost host(tmp / "fx");
    git::LooseObjectStore store(fixture_image_store_dir(tmp / "fx", kRepo));
    auto r = sync("partial", kRepo, 8, design, host, store);
    CHECK(r.posted_comments == 2);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].remote_id == "2002");
    CHECK(r.balanced());
    auto history = git::first_parent_history(store, *store.read_ref(kDefaultImageRef));
    CHECK(history.size() == 2);
  }

  TEST_CASE("missing pull request and unreachable fixtures abort") {
    testing::TempDir tmp;
    copy_fixture(tmp / "fx");
    FixtureDesignTool design(tmp / "fx");
    FixtureCodeHost host(tmp / "fx");
    git::MemoryObjectStore store;
    CHECK_THROWS_AS(sync("demo", kRepo, 999, design, host, store), NotFound);
    FixtureDesignTool gone(tmp / "gone");
    CHECK_THROWS_AS(sync("demo", kRepo, 7, gone, host, store), TransportError);
  }

  TEST_CASE("post failures are reported and retried on the next run") {
    MemoryDesignTool design;
    MemoryCodeHost host;
    git::MemoryObjectStore store;
    design.add_frame("p", "f", Image(30, 30));
    for (int i = 0; i < 4; ++i) design.add_comment("p", {std::to_string(i), "f", 5, 5, "note " + std::to_string(i), kT0, {}});
    host.add_pull_request("r/x", 1);
    host.fail_next_posts(1);
    auto r = sync("p", "r/x", 1, design, host, store);
    CHECK(r.posted_comments == 3);
    CHECK(r.failures.size() == 1);
    CHECK(r.balanced());
    auto again = sync("p", "r/x", 1, design, host, store);
    CHECK(again.posted_comments == 1);
    CHECK(again.skipped_duplicates == 3);
    CHECK(host.list_comments("r/x", 1).size() == 4);
  }

  TEST_CASE("a comment posted by a concurrent sync is not posted twice") {
    MemoryDesignTool design;
    MemoryCodeHost host;
    git::MemoryObjectStore store;
    design.add_frame("p", "f", Image(30, 30));
    design.add_comment("p", {"a", "f", 5, 5, "first", kT0, {}});
    host.add_pull_request("r/x", 1);
    // The rival posts its marked comment while our images are being published.
    store.inject_before_cas([&] {
      MemoryDesignTool rival_design;
      rival_design.add_frame("p", "f", Image(30, 30));
      rival_design.add_comment("p", {"a", "f", 5, 5, "first", kT0, {}});
      git::MemoryObjectStore rival_store;
      sync("p", "r/x", 1, rival_design, host, rival_store);
    });
    auto r = sync("p", "r/x", 1, design, host, store);
    CHECK(r.posted_comments == 0);
    CHECK(r.skipped_duplicates == 1);
    CHECK(host.list_comments("r/x", 1).size() == 1);
  }

  TEST_CASE("property: second sync posts nothing") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 25; ++trial) {
      MemoryDesignTool design;
      MemoryCodeHost host;
      git::MemoryObjectStore store;
      host.add_pull_request("r/x", 3);
      design.add_frame("p", "f1", Image(64, 48));
      design.add_frame("p", "f2", Image(20, 90));
      std::size_t n = 1 + rng() % 50, missing = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::string frame = rng() % 10 == 0 ? "gone" : (rng() % 2 ? "f1" : "f2");
        missing += frame == "gone";
        std::optional<std::string> parent;
        if (i > 0 && rng() % 4 == 0) parent = std::to_string(rng() % i);
        design.add_comment("p", {std::to_string(i), frame, double(rng() % 200) - 50, double(rng() % 100),
                                 testing::random_body(rng), kT0 + std::chrono::seconds(i), parent});
      }
      int post_failures = static_cast<int>(rng() % 3);
      host.fail_next_posts(post_failures);
      auto first = sync("p", "r/x", 3, design, host, store);
      REQUIRE(first.balanced());
      REQUIRE(first.fetched == n);
      std::size_t injected = missing + std::min<std::size_t>(post_failures, n - missing);
      REQUIRE(first.posted_comments == n - injected);
      host.fail_next_posts(0);
      auto second = sync("p", "r/x", 3, design, host, store);
      auto third = sync("p", "r/x", 3, design, host, store);
      REQUIRE(third.posted_comments == 0);
      REQUIRE(third.skipped_duplicates == n - missing);
      REQUIRE(second.posted_comments == injected - missing);
    }
  }
}

TEST_SUITE("collect") {
  TEST_CASE("relayed comments come back as design-tool comments") {
    MemoryDesignTool design;
    MemoryCodeHost host;
    git::MemoryObjectStore store;
    design.add_frame("demo", "login", Image(30, 30));
    design.add_comment("demo", {"1", "login", 5, 6, "Typo in title", kT0, {}});
    design.add_comment("demo", {"2", "login", 5, 6, "Agreed", kT0 + std::chrono::seconds(5), std::string("1")});
    host.add_pull_request("r/x", 7);
    host.add_native_comment("r/x", 7, "Please justify this table", kT0, std::string("docs/database-spec.md"));
    host.add_native_comment("r/x", 7, "Missing heading", kT0);
    sync("demo", "r/x", 7, design, host, store);

    auto got = fetch_code_host_comments("r/x", 7, host);
    REQUIRE(got.comments.size() == 4);
    std::size_t design_count = 0;
    for (const auto& c : got.comments) {
      if (c.source == CommentSource::kDesignTool) {
        ++design_count;
        CHECK(c.artifact == ArtifactKind::kScreenTransition);
        CHECK(std::get<DesignLocation>(c.location).frame_id == "login");
        CHECK(got.provenance.count(c.id));
      }
      CHECK(validate_comment(c).empty());
      CHECK(c.year == 2022);
    }
    CHECK(design_count == 2);
    auto reply = std::find_if(got.comments.begin(), got.comments.end(),
                              [](const auto& c) { return c.id == design_comment_id("demo", "2"); });
    REQUIRE(reply != got.comments.end());
    CHECK(reply->body == "Agreed");
    CHECK(reply->parent_id == std::optional<std::string>(design_comment_id("demo", "1")));
  }

  TEST_CASE("malformed marker stays a code-host comment with a warning") {
    MemoryCodeHost host;
    host.add_pull_request("r/x", 1);
    host.add_native_comment("r/x", 1, "hi\n<!-- [marker] scenecommenter:figma-comment-id=5 x=bad -->", kT0);
    auto got = fetch_code_host_comments("r/x", 1, host);
    REQUIRE(got.comments.size() == 1);
    CHECK(got.comments[0].source == CommentSource::kCodeHost);
    CHECK(got.warnings.size() == 1);
  }

  TEST_CASE("empty pull request") {
    MemoryCodeHost host;
    host.add_pull_request("r/x", 1);
    CHECK(fetch_code_host_comments("r/x", 1, host).comments.empty());
    CHECK_THROWS_AS(fetch_code_host_comments("r/x", 2, host), NotFound);
  }
}
