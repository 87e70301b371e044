#pragma once

#include <span>
#include <vector>

#include "inspectkit/bridge/pin.hpp"

namespace inspectkit::kernels {

struct PinJob {
  const Image* frame = nullptr;
  double x = 0;
  double y = 0;
  int index = 1;
};

/// Renders each job in order. The parallel variant produces the same vector;
/// the first exception (by job order) is rethrown after all jobs finish.
std::vector<RenderedPinImage> render_pins_serial(std::span<const PinJob> jobs);
std::vector<RenderedPinImage> render_pins_parallel(std::span<const PinJob> jobs);

}  // namespace inspectkit::kernels
