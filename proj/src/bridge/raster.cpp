#include "inspectkit/bridge/raster.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>

#include "inspectkit/core/error.hpp"

namespace inspectkit {

Image::Image(int width, int height, Rgba fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw InvalidArgument("image dimensions must be at least 1x1");
  pixels_.resize(static_cast<std::size_t>(width) * height * 4);
  for (std::size_t i = 0; i < pixels_.size(); i += 4) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
    pixels_[i + 3] = fill.a;
  }
}

Rgba Image::at(int x, int y) const {
  const auto* p = &pixels_[(static_cast<std::size_t>(y) * width_ + x) * 4];
  return {p[0], p[1], p[2], p[3]};
}

void Image::set(int x, int y, Rgba c) {
  auto* p = &pixels_[(static_cast<std::size_t>(y) * width_ + x) * 4];
  p[0] = c.r;
  p[1] = c.g;
  p[2] = c.b;
  p[3] = c.a;
}

namespace {

void write_to_string(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), length);
}

void flush_noop(png_structp) {}

struct ReadCursor {
  std::string_view bytes;
  std::size_t pos = 0;
};

void read_from_view(png_structp png, png_bytep data, png_size_t length) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + length > cur->bytes.size()) png_error(png, "unexpected end of PNG data");
  std::memcpy(data, cur->bytes.data() + cur->pos, length);
  cur->pos += length;
}

void quiet_warning(png_structp, png_const_charp) {}

// libpng reports errors through longjmp, so these helpers keep every C++
// object with a destructor outside the frame that calls setjmp.
bool encode_rows(png_structp png, png_infop info, const Image& image, std::string* out,
                 std::vector<png_bytep>& rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_write_fn(png, out, write_to_string, flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), 8, PNG_COLOR_TYPE_RGBA,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE | PNG_FILTER_SUB | PNG_FILTER_UP);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  return true;
}

bool read_header(png_structp png, png_infop info, ReadCursor* cursor, png_uint_32* w,
                 png_uint_32* h) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_read_fn(png, cursor, read_from_view);
  png_read_info(png, info);
  *w = png_get_image_width(png, info);
  *h = png_get_image_height(png, info);
  int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_GRAY ||
      color == PNG_COLOR_TYPE_PALETTE) {
    png_set_filler(png, 0xFF, PNG_FILLER_AFTER);
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  return true;
}

bool read_rows(png_structp png, png_infop info, std::vector<png_bytep>& rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_image(png, rows.data());
  png_read_end(png, info);
  return true;
}

}  // namespace

std::string encode_png(const Image& image) {
  if (image.empty()) throw InvalidArgument("cannot encode an empty image");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, quiet_warning);
  if (!png) throw Error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("png_create_info_struct failed");
  }
  std::string out;
  std::vector<png_bytep> rows(image.height());
  auto* base = const_cast<std::uint8_t*>(image.pixels().data());
  for (int y = 0; y < image.height(); ++y) {
    rows[y] = base + static_cast<std::size_t>(y) * image.width() * 4;
  }
  bool ok = encode_rows(png, info, image, &out, rows);
  png_destroy_write_struct(&png, &info);
  if (!ok) throw Error("PNG encoding failed");
  return out;
}

Image decode_png(std::string_view bytes) {
  if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8)) {
    throw ParseError("not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, quiet_warning);
  if (!png) throw Error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("png_create_info_struct failed");
  }
  ReadCursor cursor{bytes, 0};
  png_uint_32 w = 0, h = 0;
  if (!read_header(png, info, &cursor, &w, &h) || w == 0 || h == 0 || w > 1u << 15 ||
      h > 1u << 15 || png_get_rowbytes(png, info) != static_cast<png_size_t>(w) * 4) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("malformed PNG header");
  }
  Image image(static_cast<int>(w), static_cast<int>(h));
  std::vector<png_bytep> rows(h);
  auto* base = image.data();
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = base + static_cast<std::size_t>(y) * w * 4;
  bool ok = read_rows(png, info, rows);
  png_destroy_read_struct(&png, &info, nullptr);
  if (!ok) throw ParseError("malformed PNG data");
  return image;
}

}  // namespace inspectkit
