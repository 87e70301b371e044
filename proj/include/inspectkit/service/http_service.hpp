#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "inspectkit/classifier/model.hpp"
#include "inspectkit/corpus/corpus_store.hpp"
#include "inspectkit/service/config.hpp"

namespace httplib {
class Server;
}

namespace inspectkit {

/// JSON API over a corpus directory.
///
///   GET  /api/taxonomy
///   GET  /api/comments?year=&group=&unlabeled=
///   GET  /api/comments/{id}
///   POST /api/comments/{id}/labels   {"labels": [...], "labeler": "name"}
///   GET  /api/suggestions/{id}
///   GET  /api/stats
///   GET  /api/chart
///   GET  /api/flags
///   GET  /api/images/{id}            image/png
///
/// Errors are `{"error": "..."}` with 400 (malformed request), 404 (unknown
/// id, no model, no image), 409 (corpus lock busy) or 422 (invalid labels).
/// GET handlers read an in-memory snapshot that is refreshed when the corpus
/// files change on disk; only the label POST writes.
class InspectService {
 public:
  explicit InspectService(ServiceConfig config);
  ~InspectService();
  InspectService(const InspectService&) = delete;
  InspectService& operator=(const InspectService&) = delete;

  /// Binds to the configured address and serves until stop().
  bool listen();
  /// Binds to an ephemeral port on `host`; returns the port or -1.
  int bind_to_any_port(const std::string& host = "127.0.0.1");
  /// Serves on a socket bound by bind_to_any_port, until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

  const ServiceConfig& config() const { return config_; }

 private:
  struct Snapshot;
  struct ModelCache;

  std::shared_ptr<const Snapshot> snapshot();
  void invalidate();
  std::shared_ptr<const MultiLabelModel> model();
  void install_routes();

  ServiceConfig config_;
  CorpusStore store_;
  std::unique_ptr<httplib::Server> server_;

  std::shared_mutex snapshot_mu_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::mutex model_mu_;
  std::unique_ptr<ModelCache> model_cache_;
};

}  // namespace inspectkit
