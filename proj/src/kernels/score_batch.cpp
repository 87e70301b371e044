#include "inspectkit/kernels/score_batch.hpp"

namespace inspectkit::kernels {

std::vector<CategoryScores> score_batch_serial(const MultiLabelModel& model,
                                               std::span<const EncodedDoc> docs) {
  std::vector<CategoryScores> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(model.score(d));
  return out;
}

std::vector<CategoryScores> score_batch_parallel(const MultiLabelModel& model,
                                                 std::span<const EncodedDoc> docs) {
  const auto n = static_cast<long>(docs.size());
  std::vector<CategoryScores> out(docs.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = model.score(docs[i]);
  return out;
}

}  // namespace inspectkit::kernels
