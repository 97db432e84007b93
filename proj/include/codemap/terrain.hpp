#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "codemap/embedding.hpp"

namespace codemap::terrain {

inline constexpr int kMinResolution = 16;
inline constexpr double kDefaultSeaLevel = 0.1;
inline constexpr double kTargetMedianSigma = 0.02;

/// R x R heights sampled at cell centres ((c + 0.5) / R, (r + 0.5) / R),
/// row-major with row r along y.
struct ElevationGrid {
  int resolution = 0;
  std::vector<double> heights;
  double seaLevel = kDefaultSeaLevel;

  double at(int row, int col) const { return heights[static_cast<std::size_t>(row) * resolution + col]; }
  double cell_size() const { return 1.0 / resolution; }
};

struct ElevationOptions {
  int resolution = 512;
  double sigma0 = 0.0;  // <= 0: calibrate so the median sigma is kTargetMedianSigma
  double seaLevel = kDefaultSeaLevel;
};

/// sigma0 such that the median of sigma0 * sqrt(max(size, 1)) equals `target`.
double calibrate_sigma0(const std::vector<double>& sizes, double target = kTargetMedianSigma);
double sigma_for(double size, double sigma0);

/// Summed Gaussians before normalization. `sizes` is any non-negative per-file
/// metric (LOC by default). Throws std::invalid_argument on a resolution below
/// kMinResolution, mismatched inputs, or negative sizes.
ElevationGrid accumulate_elevation(const std::vector<embed::Point>& positions,
                                   const std::vector<double>& sizes, int resolution, double sigma0,
                                   double seaLevel = kDefaultSeaLevel);

/// accumulate_elevation scaled so the highest cell is exactly 1.
ElevationGrid build_elevation(const std::vector<embed::Point>& positions,
                              const std::vector<double>& sizes, const ElevationOptions& opts = {});

/// Land iff height >= level. Throws std::invalid_argument unless 0 <= level < 1.
std::vector<bool> sea_mask(const ElevationGrid& g, double level = kDefaultSeaLevel);

/// 4-connected land components; -1 for water.
std::vector<int> land_regions(const ElevationGrid& g, const std::vector<bool>& land, int* count);

nlohmann::json to_json(const ElevationGrid& g);
ElevationGrid grid_from_json(const nlohmann::json& j);

}  // namespace codemap::terrain
