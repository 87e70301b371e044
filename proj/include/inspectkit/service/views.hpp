#pragma once

#include <json.hpp>

#include "inspectkit/analytics/stats.hpp"
#include "inspectkit/corpus/corpus.hpp"

namespace inspectkit::views {

nlohmann::json taxonomy();
nlohmann::json assignment(const LabelAssignment& a);
/// Comment fields plus effective labels, labeler, provenance and, for
/// design-tool comments, the image URL.
nlohmann::json comment(const Corpus& corpus, const InspectionComment& c);
/// Scores as an array in taxonomy order plus the decided labels.
nlohmann::json suggestion(const LabelAssignment& a);
nlohmann::json flags(const std::vector<TrendFlag>& flags);

}  // namespace inspectkit::views
