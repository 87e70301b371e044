#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "inspectkit/core/comment.hpp"
#include "inspectkit/core/labels.hpp"

namespace inspectkit {

/// Keyword table for the rule baseline, one list per category.
///
/// Matching is case-insensitive for ASCII. An ASCII keyword must sit on word
/// boundaries; a trailing `*` turns it into a prefix match (`misspel*`).
/// Keywords containing non-ASCII text match anywhere, since CJK text has no
/// word separators.
struct KeywordRules {
  std::array<std::vector<std::string>, kCategoryCount> keywords;

  static const KeywordRules& defaults();

  /// Parses `slug = ["kw", "kw2"]` lines. `#` starts a comment, a `[section]`
  /// header is ignored. Throws ParseError("line N: ...").
  static KeywordRules parse(std::string_view text);
  static KeywordRules load(const std::filesystem::path& path);

  std::string to_text() const;

  LabelSet match(std::string_view body) const;
};

/// Union of matched categories, or {enhancement-request} when nothing matches.
LabelAssignment rule_baseline(const InspectionComment& comment,
                              const KeywordRules& rules = KeywordRules::defaults(),
                              Timestamp at = now_utc());

}  // namespace inspectkit
