#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "codemap/embedding.hpp"
#include "codemap/overlays.hpp"
#include "codemap/terrain.hpp"

namespace codemap::model {
struct MapModel;
}

namespace codemap::carto {

// ---------------------------------------------------------------- shading

struct LightOptions {
  double azimuthDeg = 315.0;  // clockwise from north (map up)
  double altitudeDeg = 45.0;
  double zScale = 0.05;       // height units per map width
};

/// Lambertian shade in [0,1] per cell. Gradients use central differences
/// (one-sided on the border) in map units; rows run north to south.
std::vector<double> hillshade(const terrain::ElevationGrid& g, const LightOptions& light = {});

// ---------------------------------------------------------------- contours

struct Polyline {
  std::vector<embed::Point> points;
  bool closed = false;
};

struct ContourLevel {
  double level = 0.0;
  std::vector<Polyline> lines;
};

struct ContourSet {
  std::vector<ContourLevel> levels;
};

/// Marching squares over the cell-centre lattice; a sample counts as inside
/// when height >= level. Saddles are split by the mean of the four corners.
std::vector<Polyline> iso_lines(const terrain::ElevationGrid& g, double level);

/// Iso-lines at seaLevel + m * interval for m >= 1 while the level stays
/// below 1. Throws std::invalid_argument unless interval > 0.
ContourSet contours(const terrain::ElevationGrid& g, double interval = 0.1);

/// True when a polyline is closed or both ends touch the lattice boundary.
bool closed_or_boundary(const Polyline& line, int resolution);

// ---------------------------------------------------------------- labels

enum class LabelKind { filename, keyword };

struct Box {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool intersects(const Box& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
};

struct Label {
  std::string text;
  double x = 0.0;  // box centre, map units
  double y = 0.0;
  double fontSize = 0.0;
  LabelKind kind = LabelKind::filename;
  double opacity = 1.0;
  int fileIndex = -1;
  Box box;
};

using LabelSet = std::vector<Label>;

struct LabelFile {
  std::string basename;
  double loc = 0.0;
  embed::Point pos;
};

struct Keyword {
  std::string text;
  double score = 0.0;
  embed::Point pos;
};

struct LabelOptions {
  int maxLabels = 200;
  double minFont = 0.008;
  double maxFont = 0.024;
  double fontPerSqrtLoc = 0.0016;
  double keywordFont = 0.032;
  double isolationRadius = 0.15;
  double isolatedOpacity = 0.6;
};

/// Width of a label box in map units (0.6 em per character, 1.2 em tall).
Box label_box(const std::string& text, double fontSize, embed::Point centre);
double filename_font(double loc, const LabelOptions& opts);

/// Greedy placement: filenames by descending size, then keywords by score;
/// a candidate is kept if its box (shifted inside the unit square) overlaps
/// no kept box.
LabelSet place_labels(const std::vector<LabelFile>& files, const std::vector<Keyword>& keywords,
                      const LabelOptions& opts = {});

// ---------------------------------------------------------------- rendering

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

struct RampStop {
  double t = 0.0;
  Rgb color;
};

struct Palette {
  Rgb water{156, 195, 224};
  std::vector<RampStop> land{{0.0, {167, 200, 138}},
                             {0.35, {216, 211, 156}},
                             {0.7, {185, 154, 107}},
                             {1.0, {244, 241, 234}}};
  Rgb contour{107, 90, 69};
  double contourOpacity = 0.45;
  Rgb coast{74, 111, 138};
  std::vector<RampStop> heat{{0.0, {254, 224, 139}}, {1.0, {215, 48, 31}}};
  double heatOpacity = 0.55;
  Rgb marker{215, 48, 31};
  Rgb flow{43, 43, 43};
  Rgb label{32, 32, 32};
  Rgb keyword{59, 47, 34};
};

Rgb parse_color(const std::string& hex);
std::string color_hex(Rgb c);
Rgb ramp_color(const std::vector<RampStop>& ramp, double t);
/// Overrides palette fields from a JSON object (colours as "#rrggbb").
Palette palette_from_json(const nlohmann::json& j, Palette base = {});

enum class ArrowHeads { targets, source, none };

struct RenderOptions {
  int size = 1024;  // pixels per side
  double contourInterval = 0.1;
  LightOptions light{};
  Palette palette{};
  double heatRadius = 0.04;     // map units
  double markerRadius = 0.004;  // map units per unit magnitude
  double flowWidth = 0.0015;    // map units per sqrt(flow)
  ArrowHeads arrowheads = ArrowHeads::targets;
};

/// RGBA land raster (grid resolution) with water transparent.
std::vector<std::uint8_t> land_raster(const terrain::ElevationGrid& g, const RenderOptions& opts);

/// Deterministic SVG 1.1 document. Layers bottom to top: water, land, contours,
/// coastline, heat, markers, flow, labels.
std::string render_svg(const model::MapModel& m, const std::vector<overlay::Overlay>& overlays,
                       const RenderOptions& opts = {});

/// Same draw list rasterized to PNG bytes (no text).
std::vector<std::uint8_t> render_png(const model::MapModel& m,
                                     const std::vector<overlay::Overlay>& overlays,
                                     const RenderOptions& opts = {});

nlohmann::json to_json(const Label& l);
Label label_from_json(const nlohmann::json& j);

}  // namespace codemap::carto
