#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "inspectkit/analytics/stats.hpp"
#include "inspectkit/bridge/live.hpp"
#include "inspectkit/bridge/object_store.hpp"
#include "inspectkit/bridge/publisher.hpp"
#include "inspectkit/bridge/transport.hpp"

namespace inspectkit {

struct ServiceConfig {
  std::filesystem::path corpus_dir = "corpus";
  std::optional<std::filesystem::path> fixture_dir;
  bool live_mode = false;
  std::string listen_address = "127.0.0.1:8080";
  std::string image_ref_name = kDefaultImageRef;
  /// Prefix for image links in relayed PR comments.
  std::string image_url_base;
  std::string design_api = kDefaultDesignApi;
  std::string code_host_api = kDefaultCodeHostApi;
  std::optional<std::filesystem::path> rules_file;
  std::optional<std::filesystem::path> model_file;
  /// Served at `/` when set (the triage UI bundle).
  std::optional<std::filesystem::path> static_dir;
  std::vector<TrendRule> trend_rules = default_trend_rules();

  /// Reads a JSON config. Relative paths resolve against the file's
  /// directory. Throws ParseError or NotFound.
  static ServiceConfig load(const std::filesystem::path& path);

  /// Invariant violations: live mode without credentials, live mode combined
  /// with a fixture directory, unparseable listen address, bad thresholds.
  std::vector<std::string> violations() const;

  std::filesystem::path model_path() const;
  /// Splits `host:port`. Throws InvalidArgument.
  std::pair<std::string, int> listen_endpoint() const;

  bool has_transports() const { return live_mode || fixture_dir.has_value(); }

  /// Transports for sync/collect. Throws InvalidArgument when neither live
  /// mode nor a fixture directory is configured.
  std::unique_ptr<DesignToolTransport> make_design_transport() const;
  std::unique_ptr<CodeHostTransport> make_code_host_transport() const;
  /// Image store for `repo`: the fixture repo's `images.git` or the live Git
  /// data endpoints.
  std::unique_ptr<git::ObjectStore> make_image_store(const std::string& repo) const;
};

}  // namespace inspectkit
