#pragma once

#include <span>
#include <vector>

#include "inspectkit/classifier/model.hpp"

namespace inspectkit::kernels {

std::vector<CategoryScores> score_batch_serial(const MultiLabelModel& model,
                                               std::span<const EncodedDoc> docs);
std::vector<CategoryScores> score_batch_parallel(const MultiLabelModel& model,
                                                 std::span<const EncodedDoc> docs);

}  // namespace inspectkit::kernels
