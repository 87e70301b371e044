#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "inspectkit/core/taxonomy.hpp"

namespace inspectkit::kernels {

using LabelCounts = std::array<std::uint64_t, kCategoryCount>;

/// Per-category occurrence counts over label-set bitmasks.
LabelCounts count_labels_serial(std::span<const std::uint16_t> masks);
LabelCounts count_labels_parallel(std::span<const std::uint16_t> masks);

}  // namespace inspectkit::kernels
