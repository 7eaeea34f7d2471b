#include "cntq/png_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "cntq/error.hpp"

namespace cntq {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

struct PngMessage {
  std::string text;
};

// libpng error handler: record the message, longjmp back to the caller's
// setjmp block. Never throws through libpng's C frames.
void store_error_and_jump(png_structp png, png_const_charp msg) {
  auto* out = static_cast<PngMessage*>(png_get_error_ptr(png));
  if (out) out->text = msg ? msg : "unknown libpng error";
  longjmp(png_jmpbuf(png), 1);
}

void ignore_warning(png_structp, png_const_charp) {}

struct PngReadHandle {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadHandle() {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
  }
};

struct PngWriteHandle {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteHandle() {
    if (png) png_destroy_write_struct(&png, &info);
  }
};

std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<std::uint8_t>(std::lround(y));
}

}  // namespace

GrayImage load_png(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("FileNotFound: " + path.string());
  }
  FileHandle file(std::fopen(path.string().c_str(), "rb"));
  if (!file) {
    throw IoError("FileNotFound: cannot open " + path.string());
  }

  png_byte header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 ||
      png_sig_cmp(header, 0, 8) != 0) {
    throw DataError("DecodeError: " + path.string() + " is not a PNG file");
  }

  PngMessage errmsg;
  PngReadHandle h;
  h.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &errmsg,
                                 store_error_and_jump, ignore_warning);
  if (!h.png) throw DataError("DecodeError: png_create_read_struct failed");
  h.info = png_create_info_struct(h.png);
  if (!h.info) throw DataError("DecodeError: png_create_info_struct failed");

  std::vector<png_byte> raster;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  int channels = 0;
  std::size_t stride = 0;
  bool raster_ready = false;

  if (setjmp(png_jmpbuf(h.png))) {
    throw DataError("DecodeError: " + path.string() + ": " + errmsg.text);
  }

  png_init_io(h.png, file.get());
  png_set_sig_bytes(h.png, 8);
  png_read_info(h.png, h.info);
  width = png_get_image_width(h.png, h.info);
  height = png_get_image_height(h.png, h.info);
  bit_depth = png_get_bit_depth(h.png, h.info);
  color_type = png_get_color_type(h.png, h.info);

  if (bit_depth == 16) {
    throw DataError("UnsupportedBitDepth: 16-bit PNG rejected: " +
                    path.string());
  }

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(h.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(h.png);
  }
  if (png_get_valid(h.png, h.info, PNG_INFO_tRNS)) {
    png_set_tRNS_to_alpha(h.png);
  }
  png_read_update_info(h.png, h.info);
  channels = png_get_channels(h.png, h.info);
  stride = png_get_rowbytes(h.png, h.info);

  raster.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = raster.data() + y * stride;
  }
  raster_ready = true;
  (void)raster_ready;

  png_read_image(h.png, rows.data());
  png_read_end(h.png, nullptr);

  GrayImage out(static_cast<Eigen::Index>(height),
                static_cast<Eigen::Index>(width));
  for (png_uint_32 y = 0; y < height; ++y) {
    const png_bytep row = raster.data() + y * stride;
    for (png_uint_32 x = 0; x < width; ++x) {
      const png_bytep px = row + x * channels;
      std::uint8_t v = 0;
      switch (channels) {
        case 1:
        case 2:  // gray + alpha; alpha ignored
          v = px[0];
          break;
        default:  // RGB or RGBA; alpha ignored
          v = luma601(px[0], px[1], px[2]);
          break;
      }
      out(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = v;
    }
  }
  return out;
}

void save_png(const GrayImage& img, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    FileHandle file(std::fopen(tmp.string().c_str(), "wb"));
    if (!file) {
      throw IoError("IoError: cannot open " + tmp.string() + " for writing");
    }
    PngMessage errmsg;
    PngWriteHandle h;
    h.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &errmsg,
                                    store_error_and_jump, ignore_warning);
    if (!h.png) throw IoError("IoError: png_create_write_struct failed");
    h.info = png_create_info_struct(h.png);
    if (!h.info) throw IoError("IoError: png_create_info_struct failed");

    if (setjmp(png_jmpbuf(h.png))) {
      throw IoError("IoError: PNG encode failed for " + path.string() + ": " +
                    errmsg.text);
    }

    png_init_io(h.png, file.get());
    png_set_IHDR(h.png, h.info, static_cast<png_uint_32>(img.cols()),
                 static_cast<png_uint_32>(img.rows()), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(h.png, h.info);
    for (Eigen::Index y = 0; y < img.rows(); ++y) {
      png_write_row(h.png, const_cast<png_bytep>(img.data() + y * img.cols()));
    }
    png_write_end(h.png, nullptr);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("IoError: cannot move " + tmp.string() + " to " +
                  path.string() + ": " + ec.message());
  }
}

}  // namespace cntq
