#include "wsdf/image.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "wsdf/error.hpp"

namespace wsdf {
namespace {

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
  fail(ErrorCategory::kIo, path.string() + ": " + what);
}

std::string extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) io_fail(path, std::string("cannot open (") + mode + ")");
  return f;
}

// bit_depth 8 or 16; rows are big-endian for 16-bit per the PNG format.
void write_png_rows(const std::filesystem::path& path, int width, int height, int channels, int bit_depth,
                    const std::vector<unsigned char>& bytes) {
  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    io_fail(path, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    io_fail(path, "PNG encoding failed");
  }
  png_init_io(png, file.get());
  const int color = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth, color,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t row_bytes = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(bytes.data() + row_bytes * static_cast<std::size_t>(y)));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<unsigned char> bytes;
};

DecodedPng read_png_rows(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_read_struct(&png, &info, nullptr);
    io_fail(path, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    io_fail(path, "PNG decoding failed");
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  DecodedPng out;
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  out.bytes.resize(row_bytes * static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) png_read_row(png, out.bytes.data() + row_bytes * static_cast<std::size_t>(y), nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void write_netpbm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_fail(path, "cannot open for writing");
  out << (image.channels == 1 ? "P5" : "P6") << '\n' << image.width << ' ' << image.height << "\n255\n";
  std::string bytes;
  bytes.reserve(image.data.size());
  for (double v : image.data) bytes.push_back(static_cast<char>(quantize8(v)));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) io_fail(path, "write failed");
}

Image read_netpbm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open image");
  std::string magic;
  in >> magic;
  if (magic != "P5" && magic != "P6") io_fail(path, "only binary PGM/PPM (P5/P6) is supported");
  auto next_int = [&]() {
    int v = 0;
    in >> std::ws;
    while (in.peek() == '#') {
      std::string comment;
      std::getline(in, comment);
      in >> std::ws;
    }
    if (!(in >> v)) io_fail(path, "malformed netpbm header");
    return v;
  };
  const int w = next_int();
  const int h = next_int();
  const int maxval = next_int();
  in.get();
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) io_fail(path, "unsupported netpbm dimensions or depth");
  Image img(w, h, magic == "P5" ? 1 : 3);
  std::string bytes(img.data.size(), '\0');
  if (!in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()))) io_fail(path, "truncated pixel data");
  for (std::size_t i = 0; i < bytes.size(); ++i) img.data[i] = static_cast<unsigned char>(bytes[i]) / double(maxval);
  return img;
}

}  // namespace

unsigned char quantize8(double v) {
  const double c = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
  return static_cast<unsigned char>(std::lround(c * 255.0));
}

void write_image(const std::filesystem::path& path, const Image& image) {
  require(image.channels == 1 || image.channels == 3, "images must have 1 or 3 channels");
  require(image.data.size() == static_cast<std::size_t>(image.width) * image.height * image.channels,
          "image buffer size mismatch");
  const std::string ext = extension(path);
  if (ext == ".ppm" || ext == ".pgm") {
    write_netpbm(path, image);
  } else if (ext == ".png") {
    std::vector<unsigned char> bytes(image.data.size());
    std::transform(image.data.begin(), image.data.end(), bytes.begin(), quantize8);
    write_png_rows(path, image.width, image.height, image.channels, 8, bytes);
  } else {
    io_fail(path, "unsupported image extension '" + ext + "' (use .ppm, .pgm or .png)");
  }
}

Image read_image(const std::filesystem::path& path) {
  const std::string ext = extension(path);
  if (ext == ".ppm" || ext == ".pgm") return read_netpbm(path);
  if (ext != ".png") io_fail(path, "unsupported image extension '" + ext + "'");
  const DecodedPng png = read_png_rows(path);
  Image img(png.width, png.height, png.channels);
  if (png.bit_depth == 16) {
    for (std::size_t i = 0; i < img.data.size(); ++i) {
      img.data[i] = ((png.bytes[2 * i] << 8) | png.bytes[2 * i + 1]) / 65535.0;
    }
  } else {
    for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = png.bytes[i] / 255.0;
  }
  return img;
}

void write_png16(const std::filesystem::path& path, int width, int height, const std::vector<std::uint16_t>& values) {
  require(values.size() == static_cast<std::size_t>(width) * height, "depth buffer size mismatch");
  std::vector<unsigned char> bytes(values.size() * 2);
  for (std::size_t i = 0; i < values.size(); ++i) {
    bytes[2 * i] = static_cast<unsigned char>(values[i] >> 8);
    bytes[2 * i + 1] = static_cast<unsigned char>(values[i] & 0xFF);
  }
  write_png_rows(path, width, height, 1, 16, bytes);
}

std::vector<std::uint16_t> read_png16(const std::filesystem::path& path, int& width, int& height) {
  const DecodedPng png = read_png_rows(path);
  if (png.bit_depth != 16 || png.channels != 1) io_fail(path, "expected a 16-bit grayscale PNG");
  width = png.width;
  height = png.height;
  std::vector<std::uint16_t> out(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint16_t>((png.bytes[2 * i] << 8) | png.bytes[2 * i + 1]);
  }
  return out;
}

void write_raw_f32(const std::filesystem::path& path, const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_fail(path, "cannot open for writing");
  std::string bytes;
  bytes.reserve(values.size() * 4);
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) io_fail(path, "write failed");
}

}  // namespace wsdf
