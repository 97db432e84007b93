#include "codemap/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "codemap/json_util.hpp"

namespace codemap::terrain {

namespace {
// exp(-32) ~ 1.3e-14: contributions past 8 sigma are below double noise of the peak.
constexpr double kCutoffSigmas = 8.0;
}  // namespace

double sigma_for(double size, double sigma0) { return sigma0 * std::sqrt(std::max(size, 1.0)); }

double calibrate_sigma0(const std::vector<double>& sizes, double target) {
  if (sizes.empty()) return target;
  std::vector<double> roots;
  roots.reserve(sizes.size());
  for (double s : sizes) roots.push_back(std::sqrt(std::max(s, 1.0)));
  std::sort(roots.begin(), roots.end());
  const std::size_t mid = roots.size() / 2;
  const double median = roots.size() % 2 ? roots[mid] : 0.5 * (roots[mid - 1] + roots[mid]);
  return target / median;
}

ElevationGrid accumulate_elevation(const std::vector<embed::Point>& positions,
                                   const std::vector<double>& sizes, int resolution, double sigma0,
                                   double seaLevel) {
  if (resolution < kMinResolution) throw std::invalid_argument("elevation resolution must be >= 16");
  if (positions.size() != sizes.size())
    throw std::invalid_argument("elevation: sizes do not match positions");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("elevation: sigma0 must be positive");
  if (!(seaLevel >= 0.0 && seaLevel < 1.0)) throw std::invalid_argument("sea level must lie in [0,1)");

  ElevationGrid g;
  g.resolution = resolution;
  g.seaLevel = seaLevel;
  g.heights.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);
  const double cell = 1.0 / resolution;
  std::vector<double> gx, gy;
  for (std::size_t f = 0; f < positions.size(); ++f) {
    if (sizes[f] < 0.0 || !std::isfinite(sizes[f]))
      throw std::invalid_argument("elevation: sizes must be finite and non-negative");
    const double sigma = sigma_for(sizes[f], sigma0);
    const double reach = kCutoffSigmas * sigma;
    const auto& p = positions[f];
    const int c0 = std::max(0, static_cast<int>(std::floor((p.x - reach) / cell)));
    const int c1 = std::min(resolution - 1, static_cast<int>(std::ceil((p.x + reach) / cell)));
    const int r0 = std::max(0, static_cast<int>(std::floor((p.y - reach) / cell)));
    const int r1 = std::min(resolution - 1, static_cast<int>(std::ceil((p.y + reach) / cell)));
    if (c0 > c1 || r0 > r1) continue;
    const double inv = 1.0 / (2.0 * sigma * sigma);
    // exp(-(dx^2 + dy^2) / 2s^2) factors into x and y terms.
    gx.resize(static_cast<std::size_t>(c1 - c0 + 1));
    gy.resize(static_cast<std::size_t>(r1 - r0 + 1));
    for (int c = c0; c <= c1; ++c) {
      const double dx = (c + 0.5) * cell - p.x;
      gx[c - c0] = std::exp(-dx * dx * inv);
    }
    for (int r = r0; r <= r1; ++r) {
      const double dy = (r + 0.5) * cell - p.y;
      gy[r - r0] = std::exp(-dy * dy * inv);
    }
    for (int r = r0; r <= r1; ++r) {
      double* row = g.heights.data() + static_cast<std::size_t>(r) * resolution;
      for (int c = c0; c <= c1; ++c) row[c] += gy[r - r0] * gx[c - c0];
    }
  }
  return g;
}

ElevationGrid build_elevation(const std::vector<embed::Point>& positions,
                              const std::vector<double>& sizes, const ElevationOptions& opts) {
  const double sigma0 = opts.sigma0 > 0.0 ? opts.sigma0 : calibrate_sigma0(sizes);
  ElevationGrid g = accumulate_elevation(positions, sizes, opts.resolution, sigma0, opts.seaLevel);
  const double peak = g.heights.empty() ? 0.0 : *std::max_element(g.heights.begin(), g.heights.end());
  if (peak > 0.0)
    for (auto& h : g.heights) h = h == peak ? 1.0 : h / peak;
  return g;
}

std::vector<bool> sea_mask(const ElevationGrid& g, double level) {
  if (!(level >= 0.0 && level < 1.0)) throw std::invalid_argument("sea level must lie in [0,1)");
  std::vector<bool> land(g.heights.size());
  for (std::size_t i = 0; i < g.heights.size(); ++i) land[i] = g.heights[i] >= level;
  return land;
}

std::vector<int> land_regions(const ElevationGrid& g, const std::vector<bool>& land, int* count) {
  const int r = g.resolution;
  std::vector<int> label(land.size(), -1);
  int next = 0;
  std::vector<int> stack;
  for (int start = 0; start < static_cast<int>(land.size()); ++start) {
    if (!land[start] || label[start] >= 0) continue;
    label[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const int cell = stack.back();
      stack.pop_back();
      const int row = cell / r, col = cell % r;
      const int nb[4][2] = {{row - 1, col}, {row + 1, col}, {row, col - 1}, {row, col + 1}};
      for (const auto& q : nb) {
        if (q[0] < 0 || q[0] >= r || q[1] < 0 || q[1] >= r) continue;
        const int idx = q[0] * r + q[1];
        if (land[idx] && label[idx] < 0) {
          label[idx] = next;
          stack.push_back(idx);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

nlohmann::json to_json(const ElevationGrid& g) {
  nlohmann::json heights = nlohmann::json::array();
  for (double h : g.heights) heights.push_back(json_util::fixed6(h));
  return {{"resolution", g.resolution}, {"seaLevel", json_util::fixed6(g.seaLevel)}, {"heights", heights}};
}

ElevationGrid grid_from_json(const nlohmann::json& j) {
  ElevationGrid g;
  g.resolution = j.at("resolution").get<int>();
  g.seaLevel = j.at("seaLevel").get<double>();
  g.heights = j.at("heights").get<std::vector<double>>();
  if (g.heights.size() != static_cast<std::size_t>(g.resolution) * g.resolution)
    throw std::invalid_argument("grid: heights do not match resolution");
  return g;
}

}  // namespace codemap::terrain
