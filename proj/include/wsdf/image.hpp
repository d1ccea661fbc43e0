#pragma once

#include <filesystem>
#include <vector>

namespace wsdf {

// Interleaved float image with values nominally in [0, 1].
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, int c, double fill = 0.0)
      : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

  double& at(int x, int y, int c) { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  double at(int x, int y, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
};

// 8-bit quantization used by every writer: round(clamp(v, 0, 1) * 255).
unsigned char quantize8(double v);

// Writers pick the container from the extension: .ppm/.pgm (binary
// netpbm) or .png. One-channel images become grayscale, three-channel RGB.
void write_image(const std::filesystem::path& path, const Image& image);
Image read_image(const std::filesystem::path& path);

// 16-bit grayscale PNG of values already scaled to [0, 65535].
void write_png16(const std::filesystem::path& path, int width, int height, const std::vector<std::uint16_t>& values);
std::vector<std::uint16_t> read_png16(const std::filesystem::path& path, int& width, int& height);

// Little-endian f32 dump, no header.
void write_raw_f32(const std::filesystem::path& path, const std::vector<double>& values);

}  // namespace wsdf
