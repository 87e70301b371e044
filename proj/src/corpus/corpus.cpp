#include "inspectkit/corpus/corpus.hpp"

#include <unordered_map>

#include "inspectkit/core/error.hpp"

namespace inspectkit {

IngestResult Corpus::ingest(const std::vector<InspectionComment>& comments,
                            const std::map<std::string, Provenance>& provenance) {
  IngestResult result;
  std::unordered_map<std::string, const InspectionComment*> batch;
  for (const auto& c : comments) batch.emplace(c.id, &c);

  CommentLookup lookup = [&](const std::string& id) -> const InspectionComment* {
    if (auto it = comments_.find(id); it != comments_.end()) return &it->second;
    if (auto it = batch.find(id); it != batch.end()) return it->second;
    return nullptr;
  };

  for (const auto& c : comments) {
    auto violations = validate_comment(c, lookup);
    if (!violations.empty()) {
      for (auto& v : violations) result.violations.emplace_back(c.id, std::move(v));
      continue;
    }
    auto [it, inserted] = comments_.try_emplace(c.id, c);
    if (inserted) {
      ++result.added;
    } else if (!(it->second == c)) {
      it->second = c;
      ++result.updated;
    }
    if (auto p = provenance.find(c.id); p != provenance.end()) provenance_[c.id] = p->second;
  }
  return result;
}

const InspectionComment* Corpus::find(const std::string& id) const {
  auto it = comments_.find(id);
  return it == comments_.end() ? nullptr : &it->second;
}

const LabelAssignment& Corpus::assign_labels(const std::string& comment_id, LabelSet labels,
                                             Labeler labeler, Timestamp at,
                                             std::optional<CategoryScores> scores) {
  append_assignment(LabelAssignment{comment_id, labels, std::move(labeler), scores, at});
  return log_.entries().back();
}

void Corpus::append_assignment(LabelAssignment a) {
  if (!find(a.comment_id)) throw NotFound("unknown comment id: " + a.comment_id);
  log_.append(std::move(a));
}

void Corpus::set_provenance(const std::string& comment_id, Provenance p) {
  if (!find(comment_id)) throw NotFound("unknown comment id: " + comment_id);
  provenance_[comment_id] = std::move(p);
}

const Provenance* Corpus::provenance(const std::string& comment_id) const {
  auto it = provenance_.find(comment_id);
  return it == provenance_.end() ? nullptr : &it->second;
}

}  // namespace inspectkit
