#include "inspectkit/core/taxonomy.hpp"

#include <algorithm>
#include <cctype>

#include "inspectkit/core/error.hpp"

namespace inspectkit {

namespace {

constexpr std::array<CategoryInfo, kCategoryCount> kTaxonomy{{
    {Category::kShortDescription, "short-description", "short description", "Lack of description"},
    {Category::kExcess, "excess", "excess", "Excess of description"},
    {Category::kAbstract, "abstract", "abstract", "Too abstract description"},
    {Category::kUnderstandability, "understandability", "understandability",
     "Difficult to understand the descriptions"},
    {Category::kUndefined, "undefined", "undefined", "Undefined term"},
    {Category::kInconsistent, "inconsistent", "inconsistent", "Inconsistency among deliverables"},
    {Category::kMistake, "mistake", "mistake", "Obvious errors in description and model notation"},
    {Category::kRationale, "rationale", "rationale", "Unknown design basis"},
    {Category::kShortItems, "short-items", "short items", "Lack of information to be stated"},
    {Category::kMissedInspection, "missed-inspection", "missed inspection comments",
     "Unmodified to previous inspections"},
    {Category::kPresentation, "presentation", "presentation", "Inappropriately worded"},
    {Category::kEnhancementRequest, "enhancement-request", "enhancement request",
     "Suggestions for improvements to specifications"},
    {Category::kFormat, "format", "format", "Document formatting deficiencies"},
}};

constexpr std::array<ArtifactInfo, 7> kArtifacts{{
    {ArtifactKind::kFunctionalSpec, "functional-spec", "Markdown"},
    {ArtifactKind::kScreenTransition, "screen-transition", "figma"},
    {ArtifactKind::kClassDiagram, "class-diagram", "plant UML"},
    {ArtifactKind::kDatabaseSpec, "database-spec", "Markdown"},
    {ArtifactKind::kSequenceDiagram, "sequence-diagram", "plant UML"},
    {ArtifactKind::kStatechart, "statechart", "plant UML"},
    {ArtifactKind::kOther, "other", "unspecified"},
}};

}  // namespace

const std::array<CategoryInfo, kCategoryCount>& taxonomy() { return kTaxonomy; }

const CategoryInfo& category_info(Category c) { return kTaxonomy[index_of(c)]; }

std::string_view slug(Category c) { return kTaxonomy[index_of(c)].slug; }

std::optional<Category> parse_category(std::string_view s) {
  for (const auto& info : kTaxonomy) {
    if (info.slug == s) return info.category;
  }
  return std::nullopt;
}

LabelSet LabelSet::from_mask(std::uint16_t mask) {
  LabelSet s;
  s.bits_ = std::bitset<kCategoryCount>(mask & ((1u << kCategoryCount) - 1));
  return s;
}

std::vector<Category> LabelSet::to_vector() const {
  std::vector<Category> out;
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    if (bits_.test(i)) out.push_back(category_at(i));
  }
  return out;
}

std::string LabelSet::join(char sep) const {
  std::string out;
  for (auto c : to_vector()) {
    if (!out.empty()) out += sep;
    out += slug(c);
  }
  return out;
}

LabelSet LabelSet::parse(std::string_view text, char sep) {
  LabelSet set;
  while (!text.empty()) {
    auto cut = text.find(sep);
    auto piece = text.substr(0, cut);
    while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front())))
      piece.remove_prefix(1);
    while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back())))
      piece.remove_suffix(1);
    if (!piece.empty()) {
      auto c = parse_category(piece);
      if (!c) throw InvalidArgument("unknown label: " + std::string(piece));
      set.insert(*c);
    }
    if (cut == std::string_view::npos) break;
    text.remove_prefix(cut + 1);
  }
  return set;
}

const std::array<ArtifactInfo, 7>& artifact_kinds() { return kArtifacts; }

std::string_view slug(ArtifactKind k) { return kArtifacts[static_cast<std::size_t>(k)].slug; }

std::string_view notation(ArtifactKind k) {
  return kArtifacts[static_cast<std::size_t>(k)].notation;
}

std::optional<ArtifactKind> parse_artifact_kind(std::string_view s) {
  for (const auto& info : kArtifacts) {
    if (info.slug == s) return info.kind;
  }
  return std::nullopt;
}

ArtifactKind artifact_from_path(std::string_view file_path) {
  std::string p(file_path);
  std::transform(p.begin(), p.end(), p.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  auto has = [&](std::string_view needle) { return p.find(needle) != std::string::npos; };
  if (p.empty()) return ArtifactKind::kOther;
  if (has("sequence")) return ArtifactKind::kSequenceDiagram;
  if (has("state")) return ArtifactKind::kStatechart;
  if (has("class")) return ArtifactKind::kClassDiagram;
  if (has("database") || has("/db") || has("db_") || has("schema"))
    return ArtifactKind::kDatabaseSpec;
  if (has("functional") || has("requirement")) return ArtifactKind::kFunctionalSpec;
  if (has("screen") || has("figma")) return ArtifactKind::kScreenTransition;
  return ArtifactKind::kOther;
}

}  // namespace inspectkit
