#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gapflight {

// 1 = foreground (the painted frame), 0 = background.
struct BinaryImage {
  int width = 0, height = 0;
  std::vector<std::uint8_t> px;

  BinaryImage() = default;
  BinaryImage(int w, int h) : width(w), height(h), px(size_t(w) * h, 0) {}

  std::uint8_t& at(int x, int y) { return px[size_t(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return px[size_t(y) * width + x]; }
  bool inside(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

// Depth in meters; 0 = no surface / invalid.
struct DepthImage {
  int width = 0, height = 0;
  std::vector<float> m;

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), m(size_t(w) * h, 0.0f) {}

  float& at(int x, int y) { return m[size_t(y) * width + x]; }
  float at(int x, int y) const { return m[size_t(y) * width + x]; }
};

// 8-bit binary PGM (P5). Foreground is written black (0), background white
// (255); loading thresholds at 128 (dark = foreground).
void write_pgm(const std::string& path, const BinaryImage& img);
BinaryImage read_pgm(const std::string& path);

// Raw float32 raster with a one-line text header: "DEPTHF32 <w> <h> <scale>\n"
// followed by row-major little-endian floats (meters = stored * scale).
void write_depth(const std::string& path, const DepthImage& img, double scale = 1.0);
DepthImage read_depth(const std::string& path);

}  // namespace gapflight
