#include "inspectkit/service/views.hpp"

#include <variant>

namespace inspectkit::views {

using nlohmann::json;

namespace {

json label_array(const LabelSet& labels) {
  json out = json::array();
  for (auto c : labels.to_vector()) out.push_back(slug(c));
  return out;
}

}  // namespace

json taxonomy() {
  json out = json::array();
  std::size_t i = 0;
  for (const auto& info : inspectkit::taxonomy()) {
    out.push_back({{"index", ++i},
                   {"slug", info.slug},
                   {"display_name", info.display_name},
                   {"definition", info.definition}});
  }
  return out;
}

json assignment(const LabelAssignment& a) {
  json out = {{"comment_id", a.comment_id},
              {"labels", label_array(a.labels)},
              {"labeler", a.labeler.to_string()},
              {"assigned_at", format_iso8601(a.assigned_at)}};
  if (a.scores) {
    json scores = json::object();
    for (std::size_t c = 0; c < kCategoryCount; ++c) scores[std::string(slug(category_at(c)))] = (*a.scores)[c];
    out["scores"] = scores;
  }
  return out;
}

json comment(const Corpus& corpus, const InspectionComment& c) {
  json out = {{"id", c.id},
              {"source", to_string(c.source)},
              {"year", c.year},
              {"group", c.group},
              {"author_role", to_string(c.author_role)},
              {"artifact", slug(c.artifact)},
              {"body", c.body},
              {"created_at", format_iso8601(c.created_at)},
              {"parent_id", c.parent_id ? json(*c.parent_id) : json(nullptr)}};
  if (const auto* d = std::get_if<DesignLocation>(&c.location)) {
    out["location"] = {{"project_id", d->project_id}, {"frame_id", d->frame_id}, {"x", d->x}, {"y", d->y}};
  } else if (const auto* h = std::get_if<CodeHostLocation>(&c.location)) {
    out["location"] = {{"repo", h->repo},
                       {"pr_number", h->pr_number},
                       {"file_path", h->file_path ? json(*h->file_path) : json(nullptr)}};
  }
  if (const LabelAssignment* a = corpus.effective_assignment(c.id)) {
    out["labels"] = label_array(a->labels);
    out["labeler"] = a->labeler.to_string();
  } else {
    out["labels"] = json::array();
    out["labeler"] = nullptr;
  }
  if (const Provenance* p = corpus.provenance(c.id)) {
    out["provenance"] = {{"repo", p->repo}, {"pr_number", p->pr_number}, {"image_path", p->image_path}};
    if (!p->image_path.empty()) out["image_url"] = "/api/images/" + c.id;
  }
  return out;
}

json suggestion(const LabelAssignment& a) {
  json scores = json::array();
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    scores.push_back({{"slug", slug(category_at(c))}, {"score", a.scores ? (*a.scores)[c] : 0.0}});
  }
  return {{"comment_id", a.comment_id},
          {"labels", label_array(a.labels)},
          {"model", a.labeler.to_string()},
          {"scores", scores}};
}

json flags(const std::vector<TrendFlag>& flags) {
  json out = json::array();
  for (const auto& f : flags) {
    out.push_back({{"year", f.year},
                   {"group", f.group},
                   {"key", std::to_string(f.year) + f.group},
                   {"slug", slug(f.category)},
                   {"threshold", f.threshold},
                   {"share", f.share},
                   {"message", f.message}});
  }
  return out;
}

}  // namespace inspectkit::views
