#include "inspectkit/kernels/label_counts.hpp"

namespace inspectkit::kernels {

LabelCounts count_labels_serial(std::span<const std::uint16_t> masks) {
  LabelCounts counts{};
  for (auto m : masks) {
    for (std::size_t c = 0; c < kCategoryCount; ++c) counts[c] += (m >> c) & 1u;
  }
  return counts;
}

LabelCounts count_labels_parallel(std::span<const std::uint16_t> masks) {
  const auto n = static_cast<long>(masks.size());
  std::uint64_t counts[kCategoryCount] = {};
#pragma omp parallel for reduction(+ : counts[:kCategoryCount]) schedule(static)
  for (long i = 0; i < n; ++i) {
    const std::uint16_t m = masks[i];
    for (std::size_t c = 0; c < kCategoryCount; ++c) counts[c] += (m >> c) & 1u;
  }
  LabelCounts out{};
  for (std::size_t c = 0; c < kCategoryCount; ++c) out[c] = counts[c];
  return out;
}

}  // namespace inspectkit::kernels
