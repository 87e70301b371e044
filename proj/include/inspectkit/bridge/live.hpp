#pragma once

#include <memory>
#include <string>

#include "inspectkit/bridge/object_store.hpp"
#include "inspectkit/bridge/transport.hpp"

namespace inspectkit {

inline constexpr const char* kDesignTokenEnv = "BRIDGE_DESIGN_TOKEN";
inline constexpr const char* kCodeHostTokenEnv = "BRIDGE_CODEHOST_TOKEN";
inline constexpr const char* kDefaultDesignApi = "https://api.figma.com";
inline constexpr const char* kDefaultCodeHostApi = "https://api.github.com";

/// `scheme://host[:port]` plus an optional path prefix.
struct ApiEndpoint {
  std::string base_url;
  std::string token;
};

class HttpSession;

/// Design-tool REST client. `project_id` is the file key; each comment is
/// paired with a PNG export of the node it is pinned to. Replies inherit
/// their parent's node.
class LiveDesignTool : public DesignToolTransport {
 public:
  explicit LiveDesignTool(ApiEndpoint endpoint);
  ~LiveDesignTool() override;
  DesignFetchResult fetch_comments(const std::string& project_id) override;

 private:
  ApiEndpoint endpoint_;
  std::unique_ptr<HttpSession> http_;
};

/// Code-host REST client over issue comments (conversation) and review
/// comments (file-anchored, ids prefixed `review-`). `repo` is `owner/name`.
class LiveCodeHost : public CodeHostTransport {
 public:
  explicit LiveCodeHost(ApiEndpoint endpoint);
  ~LiveCodeHost() override;
  std::vector<PullRequestComment> list_comments(const std::string& repo, int pr_number) override;
  std::string post_comment(const std::string& repo, int pr_number, const std::string& body,
                           Timestamp created_at) override;

 private:
  ApiEndpoint endpoint_;
  std::unique_ptr<HttpSession> http_;
};

/// Object store backed by the code host's Git data endpoints. Blob digests
/// returned by the server are checked against locally computed ones. The
/// ref update is a non-forced update: since the new commit's only parent is
/// the expected head, the server's fast-forward check rejects exactly the
/// cases where the ref moved.
class LiveGitDataStore : public git::ObjectStore {
 public:
  LiveGitDataStore(ApiEndpoint endpoint, std::string repo);
  ~LiveGitDataStore() override;

  std::optional<git::ObjectId> read_ref(const std::string& name) override;
  git::Commit read_commit(const git::ObjectId& id) override;
  git::ObjectId create_blob(std::string_view bytes) override;
  git::ObjectId create_tree(const std::optional<git::ObjectId>& base_tree,
                            const std::vector<git::TreeUpsert>& upserts) override;
  git::ObjectId create_commit(const git::Commit& commit) override;
  bool compare_and_swap_ref(const std::string& name, const std::optional<git::ObjectId>& expected,
                            const git::ObjectId& desired) override;
  std::string read_blob(const git::ObjectId& id) override;
  std::vector<git::TreeEntry> read_tree(const git::ObjectId& id) override;

 private:
  std::string repo_path(const std::string& rest) const;

  ApiEndpoint endpoint_;
  std::string repo_;
  std::unique_ptr<HttpSession> http_;
};

std::string base64_encode(std::string_view bytes);
/// Ignores whitespace. Throws ParseError on invalid input.
std::string base64_decode(std::string_view text);

/// Reads a token from the environment; throws InvalidArgument naming the
/// variable when it is unset or empty.
std::string token_from_env(const char* name);

}  // namespace inspectkit
