#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inspectkit/bridge/raster.hpp"
#include "inspectkit/core/timestamp.hpp"

namespace inspectkit {

/// A comment fetched from the design tool, paired with the image of the frame
/// it annotates.
struct DesignToolComment {
  std::string remote_id;
  std::string frame_id;
  Image frame_image;
  double x = 0;
  double y = 0;
  std::string body;
  Timestamp created_at{};
  std::optional<std::string> parent_remote_id;
};

struct SyncFailure {
  std::string remote_id;
  std::string reason;
  friend bool operator==(const SyncFailure&, const SyncFailure&) = default;
};

struct DesignFetchResult {
  std::vector<DesignToolComment> comments;
  /// Records that could not be paired with a frame image.
  std::vector<SyncFailure> failures;
};

/// Source of design-tool comments.
class DesignToolTransport {
 public:
  virtual ~DesignToolTransport() = default;
  /// Throws NotFound for an unknown project, ParseError for a malformed
  /// payload (naming the record) and TransportError when unreachable.
  virtual DesignFetchResult fetch_comments(const std::string& project_id) = 0;
};

struct PullRequestComment {
  std::string id;
  std::string body;
  Timestamp created_at{};
  std::string author;
  std::optional<std::string> file_path;
};

/// Pull-request conversation on the code host.
class CodeHostTransport {
 public:
  virtual ~CodeHostTransport() = default;
  /// Throws NotFound("PR not found") when the PR does not exist.
  virtual std::vector<PullRequestComment> list_comments(const std::string& repo, int pr_number) = 0;
  /// Returns the new comment id. `created_at` is a hint used by transports
  /// that assign their own timestamps only when they have no clock.
  virtual std::string post_comment(const std::string& repo, int pr_number,
                                   const std::string& body, Timestamp created_at) = 0;
};

// ---------------------------------------------------------------------------
// Directory-of-JSON fixtures:
//
//   <root>/project/<id>/comments.json      [{remote_id, frame_id, x, y, body,
//                                            created_at, parent_remote_id}]
//   <root>/project/<id>/frames/<frame>.png
//   <root>/repo/<name>/pr/<n>/comments.json [{id, body, created_at, author,
//                                            file_path}]
//   <root>/repo/<name>/images.git/          image store (see LooseObjectStore)

class FixtureDesignTool : public DesignToolTransport {
 public:
  explicit FixtureDesignTool(std::filesystem::path root);
  DesignFetchResult fetch_comments(const std::string& project_id) override;

 private:
  std::filesystem::path root_;
};

class FixtureCodeHost : public CodeHostTransport {
 public:
  explicit FixtureCodeHost(std::filesystem::path root);
  std::vector<PullRequestComment> list_comments(const std::string& repo, int pr_number) override;
  std::string post_comment(const std::string& repo, int pr_number, const std::string& body,
                           Timestamp created_at) override;

  std::filesystem::path pr_dir(const std::string& repo, int pr_number) const;

 private:
  std::filesystem::path root_;
};

std::filesystem::path fixture_image_store_dir(const std::filesystem::path& root,
                                              const std::string& repo);

// ---------------------------------------------------------------------------
// In-memory doubles for tests and simulations.

class MemoryDesignTool : public DesignToolTransport {
 public:
  struct Record {
    std::string remote_id;
    std::string frame_id;
    double x = 0;
    double y = 0;
    std::string body;
    Timestamp created_at{};
    std::optional<std::string> parent_remote_id;
  };

  void add_frame(const std::string& project, const std::string& frame_id, Image image);
  void add_comment(const std::string& project, Record record);
  /// Makes the next fetch throw TransportError.
  void fail_next_fetch() { fail_next_ = true; }

  DesignFetchResult fetch_comments(const std::string& project_id) override;

 private:
  struct Project {
    std::map<std::string, Image> frames;
    std::vector<Record> comments;
  };
  std::map<std::string, Project> projects_;
  bool fail_next_ = false;
};

class MemoryCodeHost : public CodeHostTransport {
 public:
  void add_pull_request(const std::string& repo, int pr_number);
  /// Adds a comment as if a person had written it on the code host.
  std::string add_native_comment(const std::string& repo, int pr_number, std::string body,
                                 Timestamp at, std::optional<std::string> file_path = {});
  /// Makes the next `n` post_comment calls throw TransportError.
  void fail_next_posts(int n) { failing_posts_ = n; }

  std::vector<PullRequestComment> list_comments(const std::string& repo, int pr_number) override;
  std::string post_comment(const std::string& repo, int pr_number, const std::string& body,
                           Timestamp created_at) override;

  std::size_t post_count() const { return posts_; }

 private:
  std::map<std::pair<std::string, int>, std::vector<PullRequestComment>> prs_;
  int next_id_ = 1;
  std::size_t posts_ = 0;
  int failing_posts_ = 0;
};

/// Replaces characters outside [A-Za-z0-9._-] with '_' for use in ids and
/// file names.
std::string sanitize_id_part(std::string_view s);

}  // namespace inspectkit
