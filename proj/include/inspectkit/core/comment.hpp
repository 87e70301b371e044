#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "inspectkit/core/taxonomy.hpp"
#include "inspectkit/core/timestamp.hpp"

namespace inspectkit {

enum class CommentSource { kDesignTool, kCodeHost };
enum class AuthorRole { kTeacher, kTeachingAssistant, kStudent };

std::string_view to_string(CommentSource s);
std::optional<CommentSource> parse_source(std::string_view s);
std::string_view to_string(AuthorRole r);
std::optional<AuthorRole> parse_author_role(std::string_view s);

/// Position of a comment on a design-tool frame. Coordinates are not clamped
/// here; they may lie outside the frame.
struct DesignLocation {
  std::string project_id;
  std::string frame_id;
  double x = 0;
  double y = 0;

  friend bool operator==(const DesignLocation&, const DesignLocation&) = default;
};

struct CodeHostLocation {
  std::string repo;
  int pr_number = 0;
  std::optional<std::string> file_path;

  friend bool operator==(const CodeHostLocation&, const CodeHostLocation&) = default;
};

using SourceLocation = std::variant<DesignLocation, CodeHostLocation>;

struct InspectionComment {
  std::string id;
  CommentSource source = CommentSource::kCodeHost;
  int year = 0;
  std::string group;
  AuthorRole author_role = AuthorRole::kTeacher;
  ArtifactKind artifact = ArtifactKind::kOther;
  std::string body;
  Timestamp created_at{};
  SourceLocation location;
  std::optional<std::string> parent_id;

  friend bool operator==(const InspectionComment&, const InspectionComment&) = default;
};

/// Lookup used to resolve parent references during validation.
using CommentLookup = std::function<const InspectionComment*(const std::string& id)>;

/// Returns every invariant violation of `c`; an empty list means the comment
/// is well formed. Parent references are only checked when `lookup` is set.
std::vector<std::string> validate_comment(const InspectionComment& c,
                                          const CommentLookup& lookup = {});

/// True when `text` has at least one non-whitespace character.
bool has_visible_text(std::string_view text);

}  // namespace inspectkit
