#include "inspectkit/kernels/pin_batch.hpp"

#include <exception>
#include <optional>

#include "inspectkit/core/error.hpp"

namespace inspectkit::kernels {

namespace {

RenderedPinImage render_one(const PinJob& job) {
  if (!job.frame) throw InvalidArgument("pin job without frame");
  return render_pin(*job.frame, job.x, job.y, job.index);
}

}  // namespace

std::vector<RenderedPinImage> render_pins_serial(std::span<const PinJob> jobs) {
  std::vector<RenderedPinImage> out;
  out.reserve(jobs.size());
  for (const auto& job : jobs) out.push_back(render_one(job));
  return out;
}

std::vector<RenderedPinImage> render_pins_parallel(std::span<const PinJob> jobs) {
  const auto n = static_cast<long>(jobs.size());
  std::vector<std::optional<RenderedPinImage>> slots(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      slots[i] = render_one(jobs[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<RenderedPinImage> out;
  out.reserve(jobs.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace inspectkit::kernels
