#include "codemap/cartography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "codemap/json_util.hpp"

namespace codemap::carto {

using json_util::fixed6;

std::vector<double> hillshade(const terrain::ElevationGrid& g, const LightOptions& light) {
  const int r = g.resolution;
  std::vector<double> shade(g.heights.size(), 0.0);
  if (r <= 0) return shade;
  const double deg = std::numbers::pi / 180.0;
  const double az = light.azimuthDeg * deg;
  const double alt = light.altitudeDeg * deg;
  // east, north, up
  const double lx = std::sin(az) * std::cos(alt);
  const double ly = std::cos(az) * std::cos(alt);
  const double lz = std::sin(alt);
  const double cell = 1.0 / r;

  for (int row = 0; row < r; ++row) {
    for (int col = 0; col < r; ++col) {
      double dhdx = 0.0, dhdsouth = 0.0;
      if (r > 1) {
        const int c0 = std::max(col - 1, 0), c1 = std::min(col + 1, r - 1);
        const int r0 = std::max(row - 1, 0), r1 = std::min(row + 1, r - 1);
        dhdx = (g.at(row, c1) - g.at(row, c0)) / ((c1 - c0) * cell);
        dhdsouth = (g.at(r1, col) - g.at(r0, col)) / ((r1 - r0) * cell);
      }
      const double dhdnorth = -dhdsouth;
      double nx = -light.zScale * dhdx;
      double ny = -light.zScale * dhdnorth;
      double nz = 1.0;
      const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
      nx /= len;
      ny /= len;
      nz /= len;
      shade[static_cast<std::size_t>(row) * r + col] =
          std::clamp(nx * lx + ny * ly + nz * lz, 0.0, 1.0);
    }
  }
  return shade;
}

namespace {

struct Segment {
  long long a, b;  // lattice-edge ids
};

}  // namespace

std::vector<Polyline> iso_lines(const terrain::ElevationGrid& g, double level) {
  const int r = g.resolution;
  std::vector<Polyline> out;
  if (r < 2) return out;
  const double cell = 1.0 / r;
  auto coord = [cell](int i) { return (i + 0.5) * cell; };

  // Edge ids: horizontal edge (row, col)-(row, col+1) -> 2*(row*r+col),
  // vertical edge (row, col)-(row+1, col) -> 2*(row*r+col)+1.
  std::unordered_map<long long, embed::Point> points;
  auto edge_point = [&](long long id) {
    auto it = points.find(id);
    if (it != points.end()) return id;
    const long long base = id / 2;
    const int row = static_cast<int>(base / r), col = static_cast<int>(base % r);
    const bool horizontal = id % 2 == 0;
    const int row2 = horizontal ? row : row + 1;
    const int col2 = horizontal ? col + 1 : col;
    const double a = g.at(row, col), b = g.at(row2, col2);
    const double t = (level - a) / (b - a);
    points.emplace(id, embed::Point{coord(col) + t * (coord(col2) - coord(col)),
                                    coord(row) + t * (coord(row2) - coord(row))});
    return id;
  };
  auto h_edge = [r](int row, int col) { return 2LL * (static_cast<long long>(row) * r + col); };
  auto v_edge = [r](int row, int col) { return 2LL * (static_cast<long long>(row) * r + col) + 1; };

  std::vector<Segment> segs;
  for (int row = 0; row + 1 < r; ++row) {
    for (int col = 0; col + 1 < r; ++col) {
      const double tl = g.at(row, col), tr = g.at(row, col + 1);
      const double br = g.at(row + 1, col + 1), bl = g.at(row + 1, col);
      const int idx = (tl >= level ? 8 : 0) | (tr >= level ? 4 : 0) | (br >= level ? 2 : 0) |
                      (bl >= level ? 1 : 0);
      if (idx == 0 || idx == 15) continue;
      const long long top = h_edge(row, col), bottom = h_edge(row + 1, col);
      const long long left = v_edge(row, col), right = v_edge(row, col + 1);
      auto seg = [&](long long e1, long long e2) { segs.push_back({edge_point(e1), edge_point(e2)}); };
      const bool centre_in = (tl + tr + br + bl) / 4.0 >= level;
      switch (idx) {
        case 1: case 14: seg(left, bottom); break;
        case 2: case 13: seg(bottom, right); break;
        case 3: case 12: seg(left, right); break;
        case 4: case 11: seg(top, right); break;
        case 6: case 9: seg(top, bottom); break;
        case 7: case 8: seg(left, top); break;
        case 5:  // tr, bl inside
          if (centre_in) {
            seg(left, top);
            seg(bottom, right);
          } else {
            seg(left, bottom);
            seg(top, right);
          }
          break;
        case 10:  // tl, br inside
          if (centre_in) {
            seg(top, right);
            seg(left, bottom);
          } else {
            seg(left, top);
            seg(bottom, right);
          }
          break;
        default: break;
      }
    }
  }

  std::unordered_map<long long, std::vector<int>> touching;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    touching[segs[s].a].push_back(s);
    touching[segs[s].b].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  auto next_segment = [&](long long at, int from) {
    for (int s : touching[at])
      if (s != from && !used[s]) return s;
    return -1;
  };

  for (int s0 = 0; s0 < static_cast<int>(segs.size()); ++s0) {
    if (used[s0]) continue;
    used[s0] = true;
    std::vector<long long> chain{segs[s0].a, segs[s0].b};
    // forward from b
    for (int cur = s0;;) {
      const long long end = chain.back();
      const int nxt = next_segment(end, cur);
      if (nxt < 0) break;
      used[nxt] = true;
      chain.push_back(segs[nxt].a == end ? segs[nxt].b : segs[nxt].a);
      cur = nxt;
    }
    const bool closed = chain.size() > 2 && chain.front() == chain.back();
    if (!closed) {
      std::vector<long long> head;
      for (int cur = s0;;) {
        const long long end = head.empty() ? chain.front() : head.back();
        const int nxt = next_segment(end, cur);
        if (nxt < 0) break;
        used[nxt] = true;
        head.push_back(segs[nxt].a == end ? segs[nxt].b : segs[nxt].a);
        cur = nxt;
      }
      chain.insert(chain.begin(), head.rbegin(), head.rend());
    }
    Polyline line;
    line.closed = closed;
    const std::size_t count = closed ? chain.size() - 1 : chain.size();
    for (std::size_t i = 0; i < count; ++i) line.points.push_back(points.at(chain[i]));
    out.push_back(std::move(line));
  }
  return out;
}

ContourSet contours(const terrain::ElevationGrid& g, double interval) {
  if (!(interval > 0.0)) throw std::invalid_argument("contour interval must be positive");
  ContourSet set;
  for (int m = 1;; ++m) {
    const double level = g.seaLevel + m * interval;
    if (level >= 1.0) break;
    set.levels.push_back({level, iso_lines(g, level)});
  }
  return set;
}

bool closed_or_boundary(const Polyline& line, int resolution) {
  if (line.closed) return true;
  if (line.points.empty()) return false;
  const double lo = 0.5 / resolution;
  const double hi = (resolution - 0.5) / resolution;
  const double eps = 1e-12;
  auto on_boundary = [&](const embed::Point& p) {
    return std::abs(p.x - lo) < eps || std::abs(p.x - hi) < eps || std::abs(p.y - lo) < eps ||
           std::abs(p.y - hi) < eps;
  };
  return on_boundary(line.points.front()) && on_boundary(line.points.back());
}

Box label_box(const std::string& text, double fontSize, embed::Point centre) {
  const double w = static_cast<double>(text.size()) * 0.6 * fontSize;
  const double h = 1.2 * fontSize;
  return {centre.x - w / 2, centre.y - h / 2, centre.x + w / 2, centre.y + h / 2};
}

double filename_font(double loc, const LabelOptions& opts) {
  return std::clamp(opts.fontPerSqrtLoc * std::sqrt(std::max(loc, 0.0)), opts.minFont, opts.maxFont);
}

LabelSet place_labels(const std::vector<LabelFile>& files, const std::vector<Keyword>& keywords,
                      const LabelOptions& opts) {
  struct Candidate {
    Label label;
    double rank;
    int order;
  };
  std::vector<Candidate> names, terms;
  for (int i = 0; i < static_cast<int>(files.size()); ++i) {
    const auto& f = files[i];
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < static_cast<int>(files.size()); ++j)
      if (j != i) nearest = std::min(nearest, embed::distance(f.pos, files[j].pos));
    Label l;
    l.text = f.basename;
    l.fontSize = filename_font(f.loc, opts);
    l.kind = LabelKind::filename;
    l.opacity = nearest > opts.isolationRadius ? opts.isolatedOpacity : 1.0;
    l.fileIndex = i;
    l.x = f.pos.x;
    l.y = f.pos.y;
    names.push_back({std::move(l), f.loc, i});
  }
  for (int i = 0; i < static_cast<int>(keywords.size()); ++i) {
    Label l;
    l.text = keywords[i].text;
    l.fontSize = opts.keywordFont;
    l.kind = LabelKind::keyword;
    l.x = keywords[i].pos.x;
    l.y = keywords[i].pos.y;
    terms.push_back({std::move(l), keywords[i].score, i});
  }
  auto by_rank = [](const Candidate& a, const Candidate& b) {
    if (a.rank != b.rank) return a.rank > b.rank;
    return a.order < b.order;
  };
  std::stable_sort(names.begin(), names.end(), by_rank);
  std::stable_sort(terms.begin(), terms.end(), by_rank);

  LabelSet placed;
  auto consider = [&](Candidate& c) {
    if (static_cast<int>(placed.size()) >= opts.maxLabels) return;
    if (c.label.text.empty()) return;
    Box b = label_box(c.label.text, c.label.fontSize, {c.label.x, c.label.y});
    const double w = b.x1 - b.x0, h = b.y1 - b.y0;
    if (w > 1.0 || h > 1.0) return;
    const double dx = b.x0 < 0 ? -b.x0 : (b.x1 > 1 ? 1 - b.x1 : 0.0);
    const double dy = b.y0 < 0 ? -b.y0 : (b.y1 > 1 ? 1 - b.y1 : 0.0);
    b = {b.x0 + dx, b.y0 + dy, b.x1 + dx, b.y1 + dy};
    for (const auto& p : placed)
      if (p.box.intersects(b)) return;
    c.label.x = (b.x0 + b.x1) / 2;
    c.label.y = (b.y0 + b.y1) / 2;
    c.label.box = b;
    placed.push_back(c.label);
  };
  for (auto& c : names) consider(c);
  for (auto& c : terms) consider(c);
  return placed;
}

nlohmann::json to_json(const Label& l) {
  return {{"text", l.text},
          {"x", fixed6(l.x)},
          {"y", fixed6(l.y)},
          {"fontSize", fixed6(l.fontSize)},
          {"kind", l.kind == LabelKind::filename ? "filename" : "keyword"},
          {"opacity", fixed6(l.opacity)},
          {"fileIndex", l.fileIndex},
          {"box", {fixed6(l.box.x0), fixed6(l.box.y0), fixed6(l.box.x1), fixed6(l.box.y1)}}};
}

Label label_from_json(const nlohmann::json& j) {
  Label l;
  l.text = j.at("text").get<std::string>();
  l.x = j.at("x").get<double>();
  l.y = j.at("y").get<double>();
  l.fontSize = j.at("fontSize").get<double>();
  l.kind = j.at("kind").get<std::string>() == "keyword" ? LabelKind::keyword : LabelKind::filename;
  l.opacity = j.value("opacity", 1.0);
  l.fileIndex = j.value("fileIndex", -1);
  if (j.contains("box")) {
    const auto& b = j.at("box");
    l.box = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()};
  } else {
    l.box = label_box(l.text, l.fontSize, {l.x, l.y});
  }
  return l;
}

}  // namespace codemap::carto
