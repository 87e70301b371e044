#include "inspectkit/bridge/pin.hpp"

#include <array>
#include <cmath>

#include "inspectkit/core/error.hpp"

namespace inspectkit {

namespace {

// 3x5 digit glyphs; each row is 3 bits, MSB = left column.
constexpr std::array<std::array<std::uint8_t, 5>, 10> kDigits{{
    {0b111, 0b101, 0b101, 0b101, 0b111},
    {0b010, 0b110, 0b010, 0b010, 0b111},
    {0b111, 0b001, 0b111, 0b100, 0b111},
    {0b111, 0b001, 0b111, 0b001, 0b111},
    {0b101, 0b101, 0b111, 0b001, 0b001},
    {0b111, 0b100, 0b111, 0b001, 0b111},
    {0b111, 0b100, 0b111, 0b101, 0b111},
    {0b111, 0b001, 0b001, 0b001, 0b001},
    {0b111, 0b101, 0b111, 0b101, 0b111},
    {0b111, 0b101, 0b111, 0b001, 0b111},
}};

constexpr int kGlyphW = 3;
constexpr int kGlyphH = 5;
constexpr int kNumeralTop = 2;  // rows below the centre

int clamp_axis(double v, int extent, bool& clamped) {
  if (!std::isfinite(v)) {
    clamped = true;
    return 0;
  }
  if (v < 0) {
    clamped = true;
    return 0;
  }
  if (v >= extent) {
    clamped = true;
    return extent - 1;
  }
  return static_cast<int>(std::floor(v));
}

}  // namespace

PinCenter clamp_to_frame(int width, int height, double x, double y, bool* clamped) {
  bool c = false;
  PinCenter center{clamp_axis(x, width, c), clamp_axis(y, height, c)};
  if (clamped) *clamped = c;
  return center;
}

RenderedPinImage render_pin(const Image& frame, double x, double y, int index) {
  if (frame.empty()) throw InvalidArgument("frame image must be at least 1x1");
  if (index < 1) throw InvalidArgument("pin index must be positive");

  RenderedPinImage out;
  out.index = index;
  out.pin_center = clamp_to_frame(frame.width(), frame.height(), x, y, &out.clamped);
  out.pixels = frame;
  Image& img = out.pixels;
  const int cx = out.pin_center.x;
  const int cy = out.pin_center.y;

  constexpr int outer2 = PinStyle::kOuterRadius * PinStyle::kOuterRadius;
  constexpr int fill2 = PinStyle::kFillRadius * PinStyle::kFillRadius;
  for (int dy = -PinStyle::kOuterRadius; dy <= PinStyle::kOuterRadius; ++dy) {
    for (int dx = -PinStyle::kOuterRadius; dx <= PinStyle::kOuterRadius; ++dx) {
      int d2 = dx * dx + dy * dy;
      if (d2 > outer2 || !img.contains(cx + dx, cy + dy)) continue;
      img.set(cx + dx, cy + dy, d2 <= fill2 ? PinStyle::kFill : PinStyle::kBorder);
    }
  }

  std::string digits = std::to_string(index);
  const int width = static_cast<int>(digits.size()) * (kGlyphW + 1) - 1;
  const int left = cx - (width - 1) / 2;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const auto& glyph = kDigits[digits[i] - '0'];
    const int gx = left + static_cast<int>(i) * (kGlyphW + 1);
    for (int row = 0; row < kGlyphH; ++row) {
      for (int col = 0; col < kGlyphW; ++col) {
        if (!(glyph[row] >> (kGlyphW - 1 - col) & 1)) continue;
        int px = gx + col;
        int py = cy + kNumeralTop + row;
        int dx = px - cx, dy = py - cy;
        if (dx * dx + dy * dy > fill2 || !img.contains(px, py)) continue;
        img.set(px, py, PinStyle::kNumeral);
      }
    }
  }

  out.png = encode_png(img);
  return out;
}

}  // namespace inspectkit
