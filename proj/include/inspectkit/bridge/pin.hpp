#pragma once

#include <string>

#include "inspectkit/bridge/raster.hpp"

namespace inspectkit {

/// Pin marker geometry and palette. Fixed so renders are reproducible.
struct PinStyle {
  static constexpr int kOuterRadius = 12;
  static constexpr int kBorderWidth = 2;
  static constexpr int kFillRadius = kOuterRadius - kBorderWidth;
  static constexpr Rgba kFill{214, 40, 57, 255};
  static constexpr Rgba kBorder{24, 24, 24, 255};
  static constexpr Rgba kNumeral{255, 255, 255, 255};
};

struct PinCenter {
  int x = 0;
  int y = 0;
  friend bool operator==(const PinCenter&, const PinCenter&) = default;
};

struct RenderedPinImage {
  Image pixels;
  std::string png;  // encode_png(pixels)
  PinCenter pin_center;
  bool clamped = false;
  int index = 1;
};

/// Clamps a comment coordinate into [0,w) x [0,h). Coordinates inside the
/// frame map to floor(x), floor(y). Non-finite values clamp to 0.
PinCenter clamp_to_frame(int width, int height, double x, double y, bool* clamped = nullptr);

/// Composites a filled disc with a contrasting ring at the clamped
/// coordinate and draws `index` in the lower half of the disc, leaving the
/// centre pixel at the fill colour. Throws InvalidArgument for an empty
/// frame or index < 1.
RenderedPinImage render_pin(const Image& frame, double x, double y, int index);

}  // namespace inspectkit
