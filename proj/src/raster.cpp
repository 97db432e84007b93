#include "raster.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace codemap::raster {

void Image::blend(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b, double alpha) {
  if (x < 0 || y < 0 || x >= width || y >= height || alpha <= 0.0) return;
  alpha = std::min(alpha, 1.0);
  auto* px = &rgba[(static_cast<std::size_t>(y) * width + x) * 4];
  const double dst_a = px[3] / 255.0;
  const double out_a = alpha + dst_a * (1.0 - alpha);
  auto mix = [&](std::uint8_t src, std::uint8_t dst) {
    if (out_a <= 0.0) return std::uint8_t{0};
    const double v = (src * alpha + dst * dst_a * (1.0 - alpha)) / out_a;
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
  };
  px[0] = mix(r, px[0]);
  px[1] = mix(g, px[1]);
  px[2] = mix(b, px[2]);
  px[3] = static_cast<std::uint8_t>(std::lround(out_a * 255.0));
}

void Image::fill_disc(double cx, double cy, double radius, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b, double alpha) {
  const int x0 = static_cast<int>(std::floor(cx - radius)), x1 = static_cast<int>(std::ceil(cx + radius));
  const int y0 = static_cast<int>(std::floor(cy - radius)), y1 = static_cast<int>(std::ceil(cy + radius));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      if (dx * dx + dy * dy <= radius * radius) blend(x, y, r, g, b, alpha);
    }
}

void Image::draw_segment(double x0, double y0, double x1, double y1, double w, std::uint8_t r,
                         std::uint8_t g, std::uint8_t b, double alpha) {
  const double half = std::max(w, 1.0) / 2.0;
  const int bx0 = static_cast<int>(std::floor(std::min(x0, x1) - half));
  const int bx1 = static_cast<int>(std::ceil(std::max(x0, x1) + half));
  const int by0 = static_cast<int>(std::floor(std::min(y0, y1) - half));
  const int by1 = static_cast<int>(std::ceil(std::max(y0, y1) + half));
  const double vx = x1 - x0, vy = y1 - y0;
  const double len2 = vx * vx + vy * vy;
  for (int y = by0; y <= by1; ++y)
    for (int x = bx0; x <= bx1; ++x) {
      const double px = x + 0.5 - x0, py = y + 0.5 - y0;
      const double t = len2 > 0.0 ? std::clamp((px * vx + py * vy) / len2, 0.0, 1.0) : 0.0;
      const double dx = px - t * vx, dy = py - t * vy;
      if (dx * dx + dy * dy <= half * half) blend(x, y, r, g, b, alpha);
    }
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void chunk(std::vector<std::uint8_t>& out, const char* type, const std::vector<std::uint8_t>& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& img) {
  std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(img.width));
  put_u32(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.insert(ihdr.end(), {8, 6, 0, 0, 0});  // 8-bit RGBA, no interlace
  chunk(out, "IHDR", ihdr);

  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(img.height) * (img.width * 4 + 1));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);
    const auto* row = &img.rgba[static_cast<std::size_t>(y) * img.width * 4];
    raw.insert(raw.end(), row, row + static_cast<std::size_t>(img.width) * 4);
  }
  uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> packed(packed_size);
  if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK)
    throw std::runtime_error("png: deflate failed");
  packed.resize(packed_size);
  chunk(out, "IDAT", packed);
  chunk(out, "IEND", {});
  return out;
}

std::string base64(const std::vector<std::uint8_t>& bytes) {
  static constexpr char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += table[(v >> 18) & 63];
    out += table[(v >> 12) & 63];
    out += table[(v >> 6) & 63];
    out += table[v & 63];
  }
  if (i < bytes.size()) {
    std::uint32_t v = bytes[i] << 16;
    if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
    out += table[(v >> 18) & 63];
    out += table[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? table[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

}  // namespace codemap::raster
