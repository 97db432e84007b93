#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace codemap::raster {

/// Straight RGBA8 image, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgba;

  Image(int w, int h) : width(w), height(h), rgba(static_cast<std::size_t>(w) * h * 4, 0) {}

  void blend(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b, double alpha);
  void fill_disc(double cx, double cy, double radius, std::uint8_t r, std::uint8_t g,
                 std::uint8_t b, double alpha);
  void draw_segment(double x0, double y0, double x1, double y1, double width, std::uint8_t r,
                    std::uint8_t g, std::uint8_t b, double alpha);
};

std::vector<std::uint8_t> encode_png(const Image& img);
std::string base64(const std::vector<std::uint8_t>& bytes);

}  // namespace codemap::raster
