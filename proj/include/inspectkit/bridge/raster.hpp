#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace inspectkit {

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 255;
  friend bool operator==(const Rgba&, const Rgba&) = default;
};

/// 8-bit RGBA raster, row-major, no padding.
class Image {
 public:
  Image() = default;
  /// Throws InvalidArgument unless both dimensions are at least 1.
  Image(int width, int height, Rgba fill = {255, 255, 255, 255});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgba at(int x, int y) const;
  void set(int x, int y, Rgba c);
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::uint8_t* data() { return pixels_.data(); }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// 8-bit RGBA PNG, fixed compression settings, no ancillary chunks, so equal
/// images always encode to identical bytes.
std::string encode_png(const Image& image);

/// Decodes any PNG colour type/bit depth into 8-bit RGBA.
/// Throws ParseError on malformed input.
Image decode_png(std::string_view bytes);

}  // namespace inspectkit
