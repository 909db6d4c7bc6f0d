#include "gapflight/image.hpp"

#include <bit>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace gapflight {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

void write_pgm(const std::string& path, const BinaryImage& img) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write image: " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<std::uint8_t> row(img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) row[x] = img.at(x, y) ? 0 : 255;
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw std::runtime_error("short write: " + path);
}

BinaryImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image: " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw std::runtime_error("not a binary PGM: " + path);
  int w = 0, h = 0, maxval = 0;
  // Header tokens may be separated by whitespace or '#' comment lines.
  auto next_int = [&]() {
    for (;;) {
      int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    int v;
    in >> v;
    return v;
  };
  w = next_int();
  h = next_int();
  maxval = next_int();
  if (!in || w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) {
    throw std::runtime_error("bad PGM header: " + path);
  }
  in.get();  // single whitespace after maxval
  BinaryImage img(w, h);
  std::vector<std::uint8_t> row(w);
  for (int y = 0; y < h; ++y) {
    in.read(reinterpret_cast<char*>(row.data()), row.size());
    if (!in) throw std::runtime_error("truncated PGM: " + path);
    for (int x = 0; x < w; ++x) img.at(x, y) = row[x] < 128 ? 1 : 0;
  }
  return img;
}

void write_depth(const std::string& path, const DepthImage& img, double scale) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write depth raster: " + path);
  out << "DEPTHF32 " << img.width << " " << img.height << " " << scale << "\n";
  if (scale == 1.0) {
    out.write(reinterpret_cast<const char*>(img.m.data()), img.m.size() * sizeof(float));
  } else {
    std::vector<float> scaled(img.m.size());
    for (size_t i = 0; i < img.m.size(); ++i) scaled[i] = float(img.m[i] / scale);
    out.write(reinterpret_cast<const char*>(scaled.data()), scaled.size() * sizeof(float));
  }
  if (!out) throw std::runtime_error("short write: " + path);
}

DepthImage read_depth(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open depth raster: " + path);
  std::string magic;
  int w = 0, h = 0;
  double scale = 1.0;
  in >> magic >> w >> h >> scale;
  if (!in || magic != "DEPTHF32" || w <= 0 || h <= 0 || scale <= 0.0) {
    throw std::runtime_error("bad depth header: " + path);
  }
  in.get();
  DepthImage img(w, h);
  in.read(reinterpret_cast<char*>(img.m.data()), img.m.size() * sizeof(float));
  if (!in) throw std::runtime_error("truncated depth raster: " + path);
  if (scale != 1.0) {
    for (auto& v : img.m) v = float(v * scale);
  }
  return img;
}

}  // namespace gapflight
