#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace inspectkit {

/// The thirteen inspection-comment categories, in canonical table order.
/// The underlying value is the row index and is stable.
enum class Category : std::uint8_t {
  kShortDescription = 0,
  kExcess,
  kAbstract,
  kUnderstandability,
  kUndefined,
  kInconsistent,
  kMistake,
  kRationale,
  kShortItems,
  kMissedInspection,
  kPresentation,
  kEnhancementRequest,
  kFormat,
};

inline constexpr std::size_t kCategoryCount = 13;

struct CategoryInfo {
  Category category;
  std::string_view slug;
  std::string_view display_name;
  std::string_view definition;
};

/// All categories in canonical order. Pure and constant.
const std::array<CategoryInfo, kCategoryCount>& taxonomy();

const CategoryInfo& category_info(Category c);
std::string_view slug(Category c);
std::optional<Category> parse_category(std::string_view slug);

constexpr std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }
constexpr Category category_at(std::size_t i) { return static_cast<Category>(i); }

/// Set of categories. Iteration and string forms always follow taxonomy order,
/// so two equal sets print identically regardless of insertion order.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::initializer_list<Category> cats) {
    for (auto c : cats) insert(c);
  }

  void insert(Category c) { bits_.set(index_of(c)); }
  void erase(Category c) { bits_.reset(index_of(c)); }
  bool contains(Category c) const { return bits_.test(index_of(c)); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }
  std::uint16_t mask() const { return static_cast<std::uint16_t>(bits_.to_ulong()); }
  static LabelSet from_mask(std::uint16_t mask);

  std::vector<Category> to_vector() const;

  /// `mistake;format` style, taxonomy order.
  std::string join(char sep = ';') const;

  /// Parses a separator-joined slug list. Empty input yields an empty set.
  /// Throws InvalidArgument("unknown label: <slug>") on an unknown slug.
  static LabelSet parse(std::string_view text, char sep = ';');

  friend bool operator==(const LabelSet&, const LabelSet&) = default;
  LabelSet operator|(const LabelSet& o) const {
    LabelSet r;
    r.bits_ = bits_ | o.bits_;
    return r;
  }

 private:
  std::bitset<kCategoryCount> bits_;
};

enum class ArtifactKind : std::uint8_t {
  kFunctionalSpec,
  kScreenTransition,
  kClassDiagram,
  kDatabaseSpec,
  kSequenceDiagram,
  kStatechart,
  kOther,
};

struct ArtifactInfo {
  ArtifactKind kind;
  std::string_view slug;
  std::string_view notation;
};

const std::array<ArtifactInfo, 7>& artifact_kinds();
std::string_view slug(ArtifactKind k);
std::string_view notation(ArtifactKind k);
std::optional<ArtifactKind> parse_artifact_kind(std::string_view slug);

/// Guesses the artifact a code-host comment targets from its file path.
/// Falls back to kOther.
ArtifactKind artifact_from_path(std::string_view file_path);

}  // namespace inspectkit
