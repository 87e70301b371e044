#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "inspectkit/core/comment.hpp"
#include "inspectkit/core/labels.hpp"

namespace inspectkit {

/// Where a design-tool comment was mirrored on the code host, and the path of
/// its pin image inside the image ref.
struct Provenance {
  std::string repo;
  int pr_number = 0;
  std::string image_path;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct IngestResult {
  std::size_t added = 0;
  std::size_t updated = 0;
  /// (comment id, violation) for every rejected comment.
  std::vector<std::pair<std::string, std::string>> violations;
};

/// The unified comment corpus: comments keyed by id, the append-only label
/// log, and relay provenance. Single-writer; concurrent const access is safe.
class Corpus {
 public:
  /// Upserts by id. Identical re-ingests change nothing; invalid comments are
  /// rejected and reported. Parents may be defined earlier in the same batch.
  IngestResult ingest(const std::vector<InspectionComment>& comments,
                      const std::map<std::string, Provenance>& provenance = {});

  const InspectionComment* find(const std::string& id) const;
  const std::map<std::string, InspectionComment>& comments() const { return comments_; }
  std::size_t size() const { return comments_.size(); }

  /// Records a new assignment. Throws NotFound for an unknown comment and
  /// InvalidArgument for an empty label set.
  const LabelAssignment& assign_labels(const std::string& comment_id, LabelSet labels,
                                       Labeler labeler, Timestamp at = now_utc(),
                                       std::optional<CategoryScores> scores = std::nullopt);

  /// Same checks as assign_labels, for replaying persisted entries.
  void append_assignment(LabelAssignment a);

  const LabelLog& log() const { return log_; }
  std::optional<LabelSet> effective_labels(const std::string& comment_id) const {
    return log_.effective_labels(comment_id);
  }
  const LabelAssignment* effective_assignment(const std::string& comment_id) const {
    return log_.effective(comment_id);
  }

  void set_provenance(const std::string& comment_id, Provenance p);
  const Provenance* provenance(const std::string& comment_id) const;
  const std::map<std::string, Provenance>& provenance_map() const { return provenance_; }

 private:
  std::map<std::string, InspectionComment> comments_;
  std::map<std::string, Provenance> provenance_;
  LabelLog log_;
};

}  // namespace inspectkit
