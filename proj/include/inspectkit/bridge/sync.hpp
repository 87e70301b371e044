#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inspectkit/bridge/object_store.hpp"
#include "inspectkit/bridge/publisher.hpp"
#include "inspectkit/bridge/transport.hpp"
#include "inspectkit/core/comment.hpp"
#include "inspectkit/corpus/corpus.hpp"

namespace inspectkit {

struct SyncOptions {
  std::string image_ref = kDefaultImageRef;
  /// Directory inside the image ref; images land at <dir>/pr<N>/<id>.png.
  std::string image_dir = "images";
  /// Prepended to the image path in the Markdown link.
  std::string image_url_base;
  PublishPolicy publish;
  bool parallel_render = true;
};

struct SyncReport {
  std::size_t fetched = 0;
  std::size_t published_images = 0;
  std::size_t posted_comments = 0;
  std::size_t skipped_duplicates = 0;
  std::vector<SyncFailure> failures;

  /// fetched == posted + skipped + |failures|
  bool balanced() const {
    return fetched == posted_comments + skipped_duplicates + failures.size();
  }
};

/// Relays every design comment of `project_id` into the PR: render pin,
/// publish image, post comment. Comments whose marker already appears in
/// the PR are skipped, so a rerun with unchanged inputs posts nothing.
/// Per-comment problems are collected in the report; only a failure to
/// fetch design comments or to list the PR aborts (by throwing).
SyncReport sync(const std::string& project_id, const std::string& repo, int pr_number,
                DesignToolTransport& design, CodeHostTransport& code_host,
                git::ObjectStore& store, const SyncOptions& options = {});

std::string design_comment_id(std::string_view project_id, std::string_view remote_id);
std::string code_host_comment_id(std::string_view repo, int pr_number, std::string_view comment_id);
std::string image_path_for(const SyncOptions& options, int pr_number, std::string_view remote_id);

struct CollectOptions {
  /// Defaults to the calendar year of each comment.
  std::optional<int> year;
  std::string group = "G1";
  AuthorRole author_role = AuthorRole::kTeacher;
};

struct CodeHostFetch {
  std::vector<InspectionComment> comments;
  std::map<std::string, Provenance> provenance;
  std::vector<std::string> warnings;
};

/// Maps all PR conversation comments to inspection comments. Comments with a
/// valid sync marker come back as design-tool comments at their frame
/// location; a malformed marker leaves the comment as a code-host comment
/// and adds a warning.
CodeHostFetch fetch_code_host_comments(const std::string& repo, int pr_number,
                                       CodeHostTransport& transport,
                                       const CollectOptions& options = {});

}  // namespace inspectkit
