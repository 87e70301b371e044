#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inspectkit/bridge/sha1.hpp"
#include "inspectkit/core/timestamp.hpp"

namespace inspectkit::git {

enum class ObjectType { kBlob, kTree, kCommit };

std::string_view to_string(ObjectType t);

inline constexpr std::string_view kModeBlob = "100644";
inline constexpr std::string_view kModeTree = "40000";

struct TreeEntry {
  std::string name;
  std::string mode;  // kModeBlob or kModeTree
  ObjectId id;

  bool is_tree() const { return mode == kModeTree; }
  friend bool operator==(const TreeEntry&, const TreeEntry&) = default;
};

struct Commit {
  ObjectId tree;
  std::vector<ObjectId> parents;
  std::string author;  // "Name <email>"
  Timestamp when{};
  std::string message;

  friend bool operator==(const Commit&, const Commit&) = default;
};

/// `<type> <size>\0<payload>`, the exact bytes that are hashed.
std::string frame_object(ObjectType type, std::string_view payload);

struct RawObject {
  ObjectType type;
  std::string payload;
};
/// Splits a framed object. Throws ParseError on a malformed header.
RawObject unframe_object(std::string_view framed);

/// Entries are sorted in canonical order (trees compare as `name/`).
std::string encode_tree(std::vector<TreeEntry> entries);
std::vector<TreeEntry> decode_tree(std::string_view payload);

std::string encode_commit(const Commit& c);
Commit decode_commit(std::string_view payload);

/// Sorts entries the way tree objects require.
void sort_tree_entries(std::vector<TreeEntry>& entries);

/// Splits `a/b/c.png` into segments. Throws InvalidArgument on empty paths,
/// empty segments, `.`/`..` segments, NUL bytes and leading slashes.
std::vector<std::string> split_path(std::string_view path);

}  // namespace inspectkit::git
