#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "inspectkit/core/taxonomy.hpp"
#include "inspectkit/core/timestamp.hpp"

namespace inspectkit {

/// Who produced a label assignment. Serialized as `human:<name>`,
/// `rule-baseline` or `ml-model:<version>`.
struct Labeler {
  enum class Kind { kHuman, kRuleBaseline, kModel };
  Kind kind = Kind::kHuman;
  std::string name;  // human name or model version; empty for the baseline

  static Labeler human(std::string name) { return {Kind::kHuman, std::move(name)}; }
  static Labeler rule_baseline() { return {Kind::kRuleBaseline, {}}; }
  static Labeler model(std::string version) { return {Kind::kModel, std::move(version)}; }

  bool is_human() const { return kind == Kind::kHuman; }
  std::string to_string() const;
  /// Throws InvalidArgument on an unrecognised form.
  static Labeler parse(std::string_view text);

  friend bool operator==(const Labeler&, const Labeler&) = default;
};

/// Per-category probabilities, indexed by taxonomy order.
using CategoryScores = std::array<double, kCategoryCount>;

struct LabelAssignment {
  std::string comment_id;
  LabelSet labels;
  Labeler labeler;
  std::optional<CategoryScores> scores;
  Timestamp assigned_at{};

  friend bool operator==(const LabelAssignment&, const LabelAssignment&) = default;
};

/// Append-only assignment history with effective-label resolution.
///
/// Effective labels of a comment: the most recently appended human assignment
/// if any exists, otherwise the most recent machine assignment. Because the
/// log is ordered, a later assignment by the same labeler always supersedes
/// an earlier one.
class LabelLog {
 public:
  /// Throws InvalidArgument on an empty label set.
  void append(LabelAssignment a);

  const std::vector<LabelAssignment>& entries() const { return entries_; }

  /// The assignment that decides the comment's effective labels.
  const LabelAssignment* effective(const std::string& comment_id) const;
  std::optional<LabelSet> effective_labels(const std::string& comment_id) const;

 private:
  struct Heads {
    std::optional<std::size_t> human;
    std::optional<std::size_t> machine;
  };
  std::vector<LabelAssignment> entries_;
  std::unordered_map<std::string, Heads> heads_;
};

}  // namespace inspectkit
