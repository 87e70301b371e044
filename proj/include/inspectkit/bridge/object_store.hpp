#pragma once

#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "inspectkit/bridge/git_objects.hpp"

namespace inspectkit::git {

/// One file to place in a tree, addressed by slash-separated path.
struct TreeUpsert {
  std::string path;
  ObjectId blob;
};

/// Content-addressed object store with named refs, shaped after a code
/// host's Git data API: every write returns the digest of what was stored
/// and ref updates are compare-and-swap.
class ObjectStore {
 public:
  virtual ~ObjectStore() = default;

  virtual std::optional<ObjectId> read_ref(const std::string& name) = 0;
  /// Throws NotFound for an unknown commit.
  virtual Commit read_commit(const ObjectId& id) = 0;
  virtual ObjectId create_blob(std::string_view bytes) = 0;
  /// `base_tree` with each upsert written at its path, creating intermediate
  /// trees. Throws InvalidArgument for bad paths or unknown digests.
  virtual ObjectId create_tree(const std::optional<ObjectId>& base_tree,
                               const std::vector<TreeUpsert>& upserts) = 0;
  /// Throws InvalidArgument when the tree or a parent does not exist.
  virtual ObjectId create_commit(const Commit& commit) = 0;
  /// Moves `name` to `desired` iff it currently points at `expected`
  /// (nullopt meaning "does not exist"). Returns false when the ref moved.
  virtual bool compare_and_swap_ref(const std::string& name, const std::optional<ObjectId>& expected,
                                    const ObjectId& desired) = 0;

  virtual std::string read_blob(const ObjectId& id) = 0;
  virtual std::vector<TreeEntry> read_tree(const ObjectId& id) = 0;
};

/// Store whose objects live in a local key/value space; implements tree
/// editing and reference checks on top of get/put of framed objects.
class LocalObjectStore : public ObjectStore {
 public:
  Commit read_commit(const ObjectId& id) override;
  ObjectId create_blob(std::string_view bytes) override;
  ObjectId create_tree(const std::optional<ObjectId>& base_tree,
                       const std::vector<TreeUpsert>& upserts) override;
  ObjectId create_commit(const Commit& commit) override;
  std::string read_blob(const ObjectId& id) override;
  std::vector<TreeEntry> read_tree(const ObjectId& id) override;

  bool contains(const ObjectId& id);
  /// Framed bytes of an object, or nullopt.
  virtual std::optional<std::string> get_raw(const ObjectId& id) = 0;

 protected:
  virtual void put_raw(const ObjectId& id, const std::string& framed) = 0;

 private:
  RawObject load(const ObjectId& id, ObjectType expected);
  ObjectId store(ObjectType type, std::string_view payload);
  ObjectId write_subtree(const std::optional<ObjectId>& base,
                         const std::vector<std::pair<std::vector<std::string>, ObjectId>>& files,
                         std::size_t depth);
};

/// In-memory store. Ref operations are linearizable. Tests can queue actions
/// that run inside the next compare_and_swap_ref calls, before the compare,
/// to simulate a concurrent writer moving the ref.
class MemoryObjectStore : public LocalObjectStore {
 public:
  std::optional<ObjectId> read_ref(const std::string& name) override;
  bool compare_and_swap_ref(const std::string& name, const std::optional<ObjectId>& expected,
                            const ObjectId& desired) override;
  std::optional<std::string> get_raw(const ObjectId& id) override;

  /// Each queued action runs at the start of one later CAS call. Actions may
  /// call back into the store; CAS calls made by an action do not consume
  /// further queued actions.
  void inject_before_cas(std::function<void()> action);
  std::size_t pending_injections() const;

  std::size_t object_count() const;
  std::map<std::string, ObjectId> refs() const;

 protected:
  void put_raw(const ObjectId& id, const std::string& framed) override;

 private:
  bool get_raw_locked_commit(const ObjectId& id) const;

  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> objects_;  // hex -> framed
  std::map<std::string, ObjectId> refs_;
  std::deque<std::function<void()>> injections_;
  bool running_injection_ = false;
};

/// Loose-object repository on disk in the layout git itself uses
/// (`objects/xx/yyyy...` zlib-deflated, `refs/heads/...` text files), so
/// the result can be inspected with stock git tooling. Ref updates take an
/// exclusive lock file per ref.
class LooseObjectStore : public LocalObjectStore {
 public:
  /// Creates the repository skeleton (HEAD, objects/, refs/) if missing.
  explicit LooseObjectStore(std::filesystem::path git_dir);

  const std::filesystem::path& git_dir() const { return git_dir_; }

  std::optional<ObjectId> read_ref(const std::string& name) override;
  bool compare_and_swap_ref(const std::string& name, const std::optional<ObjectId>& expected,
                            const ObjectId& desired) override;
  std::optional<std::string> get_raw(const ObjectId& id) override;

 protected:
  void put_raw(const ObjectId& id, const std::string& framed) override;

 private:
  std::filesystem::path object_path(const ObjectId& id) const;
  std::filesystem::path ref_path(const std::string& name) const;

  std::filesystem::path git_dir_;
};

/// Walks first-parent history from `head`, newest first.
std::vector<ObjectId> first_parent_history(ObjectStore& store, const ObjectId& head);

/// Resolves a slash-separated path inside a tree to a blob digest.
std::optional<ObjectId> lookup_path(ObjectStore& store, const ObjectId& tree,
                                    std::string_view path);

}  // namespace inspectkit::git
