#include "inspectkit/core/comment.hpp"

#include <cctype>
#include <cmath>

namespace inspectkit {

std::string_view to_string(CommentSource s) {
  return s == CommentSource::kDesignTool ? "design-tool" : "code-host";
}

std::optional<CommentSource> parse_source(std::string_view s) {
  if (s == "design-tool") return CommentSource::kDesignTool;
  if (s == "code-host") return CommentSource::kCodeHost;
  return std::nullopt;
}

std::string_view to_string(AuthorRole r) {
  switch (r) {
    case AuthorRole::kTeacher:
      return "teacher";
    case AuthorRole::kTeachingAssistant:
      return "teaching-assistant";
    case AuthorRole::kStudent:
      return "student";
  }
  return "teacher";
}

std::optional<AuthorRole> parse_author_role(std::string_view s) {
  if (s == "teacher") return AuthorRole::kTeacher;
  if (s == "teaching-assistant") return AuthorRole::kTeachingAssistant;
  if (s == "student") return AuthorRole::kStudent;
  return std::nullopt;
}

bool has_visible_text(std::string_view text) {
  for (unsigned char c : text) {
    if (!std::isspace(c)) return true;
  }
  return false;
}

std::vector<std::string> validate_comment(const InspectionComment& c,
                                          const CommentLookup& lookup) {
  std::vector<std::string> v;
  if (c.id.empty()) v.emplace_back("empty id");
  if (!has_visible_text(c.body)) v.emplace_back("empty body");
  if (c.group.empty()) v.emplace_back("empty group");

  const bool design_loc = std::holds_alternative<DesignLocation>(c.location);
  if (design_loc != (c.source == CommentSource::kDesignTool)) {
    v.emplace_back("location/source mismatch");
  }
  if (const auto* d = std::get_if<DesignLocation>(&c.location)) {
    if (!std::isfinite(d->x) || !std::isfinite(d->y)) v.emplace_back("non-finite coordinate");
    if (d->project_id.empty()) v.emplace_back("empty project id");
    if (d->frame_id.empty()) v.emplace_back("empty frame id");
  } else if (const auto* h = std::get_if<CodeHostLocation>(&c.location)) {
    if (h->pr_number <= 0) v.emplace_back("non-positive pr number");
    if (h->repo.empty()) v.emplace_back("empty repo");
  }

  if (c.parent_id) {
    if (*c.parent_id == c.id) {
      v.emplace_back("comment is its own parent");
    } else if (lookup) {
      const InspectionComment* parent = lookup(*c.parent_id);
      if (!parent) {
        v.emplace_back("unknown parent " + *c.parent_id);
      } else if (parent->source != c.source) {
        v.emplace_back("parent source mismatch");
      }
    }
  }
  return v;
}

}  // namespace inspectkit
