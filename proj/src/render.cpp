#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "codemap/cartography.hpp"
#include "codemap/json_util.hpp"
#include "codemap/model.hpp"
#include "raster.hpp"

namespace codemap {

namespace json_util {

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n' && c != '\r') continue;
        out += c;
    }
  }
  return out;
}

}  // namespace json_util

namespace carto {

using json_util::fmt_fixed;

Rgb parse_color(const std::string& hex) {
  if (hex.size() != 7 || hex[0] != '#') throw std::invalid_argument("colour must be #rrggbb: " + hex);
  auto byte = [&](int at) {
    return static_cast<std::uint8_t>(std::stoi(hex.substr(static_cast<std::size_t>(at), 2), nullptr, 16));
  };
  return {byte(1), byte(3), byte(5)};
}

std::string color_hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Rgb ramp_color(const std::vector<RampStop>& ramp, double t) {
  if (ramp.empty()) return {};
  if (t <= ramp.front().t) return ramp.front().color;
  for (std::size_t i = 1; i < ramp.size(); ++i) {
    if (t <= ramp[i].t) {
      const auto& a = ramp[i - 1];
      const auto& b = ramp[i];
      const double u = b.t > a.t ? (t - a.t) / (b.t - a.t) : 1.0;
      auto mix = [u](std::uint8_t x, std::uint8_t y) {
        return static_cast<std::uint8_t>(std::lround(x + u * (y - x)));
      };
      return {mix(a.color.r, b.color.r), mix(a.color.g, b.color.g), mix(a.color.b, b.color.b)};
    }
  }
  return ramp.back().color;
}

Palette palette_from_json(const nlohmann::json& j, Palette p) {
  auto colour = [&](const char* key, Rgb& dst) {
    if (j.contains(key)) dst = parse_color(j.at(key).get<std::string>());
  };
  auto ramp = [&](const char* key, std::vector<RampStop>& dst) {
    if (!j.contains(key)) return;
    dst.clear();
    for (const auto& stop : j.at(key))
      dst.push_back({stop.at(0).get<double>(), parse_color(stop.at(1).get<std::string>())});
    if (dst.empty()) throw std::invalid_argument(std::string("palette ramp is empty: ") + key);
  };
  colour("water", p.water);
  colour("contour", p.contour);
  colour("coast", p.coast);
  colour("marker", p.marker);
  colour("flow", p.flow);
  colour("label", p.label);
  colour("keyword", p.keyword);
  ramp("land", p.land);
  ramp("heat", p.heat);
  p.contourOpacity = j.value("contourOpacity", p.contourOpacity);
  p.heatOpacity = j.value("heatOpacity", p.heatOpacity);
  return p;
}

std::vector<std::uint8_t> land_raster(const terrain::ElevationGrid& g, const RenderOptions& opts) {
  const auto shade = hillshade(g, opts.light);
  const double flat = std::sin(opts.light.altitudeDeg * std::numbers::pi / 180.0);
  std::vector<std::uint8_t> rgba(g.heights.size() * 4, 0);
  const double sea = g.seaLevel;
  for (std::size_t i = 0; i < g.heights.size(); ++i) {
    const double h = g.heights[i];
    if (h < sea) continue;
    const double t = sea < 1.0 ? (h - sea) / (1.0 - sea) : 1.0;
    const Rgb base = ramp_color(opts.palette.land, t);
    const double factor = flat > 0.0 ? std::clamp(shade[i] / flat, 0.35, 1.35) : 1.0;
    auto lit = [factor](std::uint8_t v) {
      return static_cast<std::uint8_t>(std::lround(std::clamp(v * factor, 0.0, 255.0)));
    };
    rgba[i * 4 + 0] = lit(base.r);
    rgba[i * 4 + 1] = lit(base.g);
    rgba[i * 4 + 2] = lit(base.b);
    rgba[i * 4 + 3] = 255;
  }
  return rgba;
}

namespace {

bool any_land(const terrain::ElevationGrid& g) {
  return std::any_of(g.heights.begin(), g.heights.end(), [&](double h) { return h >= g.seaLevel && h > 0.0; });
}

std::string path_data(const Polyline& line, double scale) {
  std::string d;
  for (std::size_t i = 0; i < line.points.size(); ++i) {
    d += i == 0 ? "M" : " L";
    d += fmt_fixed(line.points[i].x * scale, 2) + "," + fmt_fixed(line.points[i].y * scale, 2);
  }
  if (line.closed) d += " Z";
  return d;
}

bool is_leaf(const overlay::FlowTree& t, int node) { return node != 0 && t.nodes[node].fileIndex >= 0; }

}  // namespace

std::string render_svg(const model::MapModel& m, const std::vector<overlay::Overlay>& overlays,
                       const RenderOptions& opts) {
  if (opts.size <= 0) throw std::invalid_argument("render size must be positive");
  const double s = opts.size;
  const auto& pal = opts.palette;
  const std::string S = std::to_string(opts.size);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" "
         "version=\"1.1\" width=\""
      << S << "\" height=\"" << S << "\" viewBox=\"0 0 " << S << " " << S << "\">\n";
  out << "<defs>\n"
      << "<marker id=\"arrowhead\" viewBox=\"0 0 10 10\" refX=\"8\" refY=\"5\" markerWidth=\"4\" "
         "markerHeight=\"4\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\""
      << color_hex(pal.flow) << "\"/></marker>\n"
      << "</defs>\n";
  out << "<rect id=\"water\" x=\"0\" y=\"0\" width=\"" << S << "\" height=\"" << S << "\" fill=\""
      << color_hex(pal.water) << "\"/>\n";

  const auto& g = m.grid;
  const bool land = g.resolution > 0 && any_land(g);
  out << "<g id=\"land\">\n";
  if (land) {
    raster::Image img(g.resolution, g.resolution);
    img.rgba = land_raster(g, opts);
    out << "<image x=\"0\" y=\"0\" width=\"" << S << "\" height=\"" << S
        << "\" preserveAspectRatio=\"none\" xlink:href=\"data:image/png;base64,"
        << raster::base64(raster::encode_png(img)) << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g id=\"contours\" fill=\"none\" stroke=\"" << color_hex(pal.contour) << "\" stroke-opacity=\""
      << fmt_fixed(pal.contourOpacity, 3) << "\" stroke-width=\"" << fmt_fixed(std::max(0.5, s / 1024.0), 2)
      << "\">\n";
  if (land)
    for (const auto& lvl : contours(g, opts.contourInterval).levels)
      for (const auto& line : lvl.lines)
        out << "<path class=\"contour\" data-level=\"" << fmt_fixed(lvl.level, 3) << "\" d=\""
            << path_data(line, s) << "\"/>\n";
  out << "</g>\n";

  out << "<g id=\"coastline\" fill=\"none\" stroke=\"" << color_hex(pal.coast) << "\" stroke-width=\""
      << fmt_fixed(std::max(1.0, 1.5 * s / 1024.0), 2) << "\">\n";
  if (land && g.seaLevel > 0.0)
    for (const auto& line : iso_lines(g, g.seaLevel))
      out << "<path class=\"coast\" d=\"" << path_data(line, s) << "\"/>\n";
  out << "</g>\n";

  auto file_pos = [&](int idx, double& x, double& y) {
    if (idx < 0 || idx >= static_cast<int>(m.files.size())) return false;
    x = m.files[idx].x * s;
    y = m.files[idx].y * s;
    return true;
  };

  out << "<g id=\"heat\">\n";
  for (const auto& o : overlays)
    if (const auto* heat = std::get_if<overlay::HeatLayer>(&o))
      for (const auto& e : heat->entries) {
        double x, y;
        if (!file_pos(e.fileIndex, x, y)) continue;
        out << "<circle class=\"heat\" cx=\"" << fmt_fixed(x, 2) << "\" cy=\"" << fmt_fixed(y, 2)
            << "\" r=\"" << fmt_fixed(opts.heatRadius * s, 2) << "\" fill=\""
            << color_hex(ramp_color(pal.heat, e.intensity)) << "\" fill-opacity=\""
            << fmt_fixed(pal.heatOpacity, 3) << "\"/>\n";
      }
  out << "</g>\n";

  out << "<g id=\"markers\">\n";
  for (const auto& o : overlays)
    if (const auto* layer = std::get_if<overlay::MarkerLayer>(&o))
      for (const auto& mk : layer->markers) {
        double x, y;
        if (!file_pos(mk.fileIndex, x, y)) continue;
        out << "<circle class=\"marker\" cx=\"" << fmt_fixed(x, 2) << "\" cy=\"" << fmt_fixed(y, 2)
            << "\" r=\"" << fmt_fixed(opts.markerRadius * s * mk.magnitude, 2) << "\" fill=\""
            << color_hex(pal.marker) << "\" fill-opacity=\"0.8\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
      }
  out << "</g>\n";

  out << "<g id=\"flow\" fill=\"none\" stroke=\"" << color_hex(pal.flow)
      << "\" stroke-linecap=\"round\" stroke-opacity=\"0.85\">\n";
  for (const auto& o : overlays)
    if (const auto* tree = std::get_if<overlay::FlowTree>(&o))
      for (const auto& [parent, child] : tree->edges) {
        auto a = tree->nodes[parent].pos;
        auto b = tree->nodes[child].pos;
        std::string head;
        if (opts.arrowheads == ArrowHeads::targets && is_leaf(*tree, child)) {
          head = " marker-end=\"url(#arrowhead)\"";
        } else if (opts.arrowheads == ArrowHeads::source && parent == 0) {
          std::swap(a, b);
          head = " marker-end=\"url(#arrowhead)\"";
        }
        out << "<path class=\"flow\" d=\"M" << fmt_fixed(a.x * s, 2) << "," << fmt_fixed(a.y * s, 2)
            << " L" << fmt_fixed(b.x * s, 2) << "," << fmt_fixed(b.y * s, 2) << "\" stroke-width=\""
            << fmt_fixed(opts.flowWidth * s * std::sqrt(tree->nodes[child].flow), 2) << "\"" << head
            << "/>\n";
      }
  out << "</g>\n";

  out << "<g id=\"labels\" font-family=\"sans-serif\" text-anchor=\"middle\" dominant-baseline=\"central\">\n";
  for (const auto& l : m.labels) {
    const bool kw = l.kind == LabelKind::keyword;
    out << "<text class=\"label " << (kw ? "keyword" : "filename") << "\" x=\"" << fmt_fixed(l.x * s, 2)
        << "\" y=\"" << fmt_fixed(l.y * s, 2) << "\" font-size=\"" << fmt_fixed(l.fontSize * s, 2)
        << "\" fill=\"" << color_hex(kw ? pal.keyword : pal.label) << "\"";
    if (kw) out << " font-weight=\"bold\"";
    if (l.opacity < 1.0) out << " fill-opacity=\"" << fmt_fixed(l.opacity, 3) << "\"";
    out << ">" << json_util::xml_escape(l.text) << "</text>\n";
  }
  out << "</g>\n";

  out << "<g id=\"annotations\" font-family=\"sans-serif\" font-size=\"" << fmt_fixed(14.0 * s / 1024.0, 2)
      << "\" fill=\"#202020\">\n";
  int line = 0;
  for (const auto& o : overlays)
    if (const auto* layer = std::get_if<overlay::MarkerLayer>(&o); layer && !layer->annotation.empty()) {
      out << "<text class=\"annotation\" x=\"" << fmt_fixed(0.02 * s, 2) << "\" y=\""
          << fmt_fixed(s * (0.97 - 0.025 * line), 2) << "\">" << json_util::xml_escape(layer->annotation)
          << "</text>\n";
      ++line;
    }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::vector<std::uint8_t> render_png(const model::MapModel& m, const std::vector<overlay::Overlay>& overlays,
                                     const RenderOptions& opts) {
  if (opts.size <= 0) throw std::invalid_argument("render size must be positive");
  const int n = opts.size;
  const double s = n;
  const auto& pal = opts.palette;
  raster::Image img(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) img.blend(x, y, pal.water.r, pal.water.g, pal.water.b, 1.0);

  const auto& g = m.grid;
  if (g.resolution > 0 && any_land(g)) {
    const auto land = land_raster(g, opts);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const int col = std::min(g.resolution - 1, x * g.resolution / n);
        const int row = std::min(g.resolution - 1, y * g.resolution / n);
        const auto* px = &land[(static_cast<std::size_t>(row) * g.resolution + col) * 4];
        if (px[3]) img.blend(x, y, px[0], px[1], px[2], 1.0);
      }
    auto stroke = [&](const Polyline& line, double w, Rgb c, double a) {
      const std::size_t count = line.points.size();
      for (std::size_t i = 0; i + 1 < count + (line.closed ? 1 : 0); ++i) {
        const auto& p = line.points[i];
        const auto& q = line.points[(i + 1) % count];
        img.draw_segment(p.x * s, p.y * s, q.x * s, q.y * s, w, c.r, c.g, c.b, a);
      }
    };
    for (const auto& lvl : contours(g, opts.contourInterval).levels)
      for (const auto& line : lvl.lines) stroke(line, 1.0, pal.contour, pal.contourOpacity);
    if (g.seaLevel > 0.0)
      for (const auto& line : iso_lines(g, g.seaLevel)) stroke(line, 1.5, pal.coast, 1.0);
  }

  for (const auto& o : overlays)
    if (const auto* heat = std::get_if<overlay::HeatLayer>(&o))
      for (const auto& e : heat->entries) {
        if (e.fileIndex < 0 || e.fileIndex >= static_cast<int>(m.files.size())) continue;
        const Rgb c = ramp_color(pal.heat, e.intensity);
        img.fill_disc(m.files[e.fileIndex].x * s, m.files[e.fileIndex].y * s, opts.heatRadius * s, c.r,
                      c.g, c.b, pal.heatOpacity);
      }
  for (const auto& o : overlays)
    if (const auto* layer = std::get_if<overlay::MarkerLayer>(&o))
      for (const auto& mk : layer->markers) {
        if (mk.fileIndex < 0 || mk.fileIndex >= static_cast<int>(m.files.size())) continue;
        img.fill_disc(m.files[mk.fileIndex].x * s, m.files[mk.fileIndex].y * s,
                      opts.markerRadius * s * mk.magnitude, pal.marker.r, pal.marker.g, pal.marker.b, 0.8);
      }
  for (const auto& o : overlays)
    if (const auto* tree = std::get_if<overlay::FlowTree>(&o))
      for (const auto& [parent, child] : tree->edges) {
        const auto& a = tree->nodes[parent].pos;
        const auto& b = tree->nodes[child].pos;
        img.draw_segment(a.x * s, a.y * s, b.x * s, b.y * s,
                         opts.flowWidth * s * std::sqrt(tree->nodes[child].flow), pal.flow.r, pal.flow.g,
                         pal.flow.b, 0.85);
      }
  return raster::encode_png(img);
}

}  // namespace carto
}  // namespace codemap
