#include "inspectkit/core/labels.hpp"

#include "inspectkit/core/error.hpp"

namespace inspectkit {

std::string Labeler::to_string() const {
  switch (kind) {
    case Kind::kHuman:
      return "human:" + name;
    case Kind::kRuleBaseline:
      return "rule-baseline";
    case Kind::kModel:
      return "ml-model:" + name;
  }
  return {};
}

Labeler Labeler::parse(std::string_view text) {
  if (text == "rule-baseline") return rule_baseline();
  if (text.rfind("human:", 0) == 0 && text.size() > 6) return human(std::string(text.substr(6)));
  if (text.rfind("ml-model:", 0) == 0 && text.size() > 9)
    return model(std::string(text.substr(9)));
  throw InvalidArgument("unknown labeler: " + std::string(text));
}

void LabelLog::append(LabelAssignment a) {
  if (a.labels.empty()) throw InvalidArgument("empty label set");
  auto& heads = heads_[a.comment_id];
  if (a.labeler.is_human()) {
    heads.human = entries_.size();
  } else {
    heads.machine = entries_.size();
  }
  entries_.push_back(std::move(a));
}

const LabelAssignment* LabelLog::effective(const std::string& comment_id) const {
  auto it = heads_.find(comment_id);
  if (it == heads_.end()) return nullptr;
  if (it->second.human) return &entries_[*it->second.human];
  if (it->second.machine) return &entries_[*it->second.machine];
  return nullptr;
}

std::optional<LabelSet> LabelLog::effective_labels(const std::string& comment_id) const {
  if (const auto* a = effective(comment_id)) return a->labels;
  return std::nullopt;
}

}  // namespace inspectkit
