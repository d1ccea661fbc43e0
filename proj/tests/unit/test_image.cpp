#include <doctest.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "helpers.hpp"
#include "wsdf/error.hpp"
#include "wsdf/image.hpp"

using namespace wsdf;

namespace {

Image gradient_image(int w, int h, int c) {
  Image img(w, h, c);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int k = 0; k < c; ++k) img.at(x, y, k) = static_cast<double>((x * 7 + y * 13 + k * 50) % 256) / 255.0;
    }
  }
  return img;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("quantization") {
  CHECK(quantize8(0.0) == 0);
  CHECK(quantize8(1.0) == 255);
  CHECK(quantize8(-3.0) == 0);
  CHECK(quantize8(7.0) == 255);
  CHECK(quantize8(0.5) == 128);
}

TEST_CASE("netpbm and png round trips are lossless on 8-bit values") {
  const auto dir = testing::scratch_dir("image_roundtrip");
  for (const char* name : {"a.ppm", "a.png"}) {
    const Image img = gradient_image(13, 7, 3);
    write_image(dir / name, img);
    const Image r = read_image(dir / name);
    REQUIRE(r.width == 13);
    REQUIRE(r.height == 7);
    REQUIRE(r.channels == 3);
    for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(r.data[i] == img.data[i]);
  }
  for (const char* name : {"g.pgm", "g.png"}) {
    const Image img = gradient_image(5, 9, 1);
    write_image(dir / name, img);
    const Image r = read_image(dir / name);
    REQUIRE(r.channels == 1);
    for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(r.data[i] == img.data[i]);
  }
}

TEST_CASE("ppm layout is a binary P6 file") {
  const auto dir = testing::scratch_dir("image_layout");
  Image img(2, 1, 3);
  img.at(0, 0, 0) = 1.0;
  img.at(1, 0, 2) = 1.0;
  write_image(dir / "x.ppm", img);
  const std::string bytes = slurp(dir / "x.ppm");
  CHECK(bytes == std::string("P6\n2 1\n255\n\xff\x00\x00\x00\x00\xff", 17));
}

TEST_CASE("16-bit png round trip") {
  const auto dir = testing::scratch_dir("image_png16");
  std::vector<std::uint16_t> v{0, 1, 65535, 1234, 40000, 7};
  write_png16(dir / "d.png", 3, 2, v);
  int w = 0, h = 0;
  CHECK(read_png16(dir / "d.png", w, h) == v);
  CHECK(w == 3);
  CHECK(h == 2);
}

TEST_CASE("raw f32 dump") {
  const auto dir = testing::scratch_dir("image_raw");
  write_raw_f32(dir / "d.f32", {1.0, -1.0, 0.5});
  const std::string bytes = slurp(dir / "d.f32");
  REQUIRE(bytes.size() == 12);
  float f[3];
  std::memcpy(f, bytes.data(), 12);
  CHECK(f[0] == 1.0f);
  CHECK(f[1] == -1.0f);
  CHECK(f[2] == 0.5f);
}

TEST_CASE("image errors") {
  const auto dir = testing::scratch_dir("image_errors");
  CHECK_THROWS_AS(read_image(dir / "missing.ppm"), Error);
  CHECK_THROWS_AS(write_image(dir / "x.bmp", Image(2, 2, 3)), Error);
  {
    std::ofstream out(dir / "trunc.ppm", std::ios::binary);
    out << "P6\n4 4\n255\nabc";
  }
  CHECK_THROWS_AS(read_image(dir / "trunc.ppm"), Error);
}
