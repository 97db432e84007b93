#include "codemap/terrain.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"

using namespace codemap;
using embed::Point;

namespace {

double grid_sum(const terrain::ElevationGrid& g) {
  double s = 0;
  for (double h : g.heights) s += h;
  return s;
}

}  // namespace

TEST(Elevation, SingleFilePeaksAtCentre) {
  const auto g = terrain::build_elevation({{0.5, 0.5}}, {100}, {64, 0.0, 0.1});
  double best = -1;
  int br = -1, bc = -1, ties = 0;
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 64; ++c) {
      if (g.at(r, c) > best) best = g.at(r, c), br = r, bc = c, ties = 1;
      else if (g.at(r, c) == best) ++ties;
    }
  EXPECT_EQ(best, 1.0);
  // The centre falls on a cell corner at even R: the four surrounding cells tie.
  EXPECT_TRUE((br == 31 || br == 32) && (bc == 31 || bc == 32));
  EXPECT_EQ(ties, 4);

  const auto odd = terrain::build_elevation({{0.5, 0.5}}, {100}, {63, 0.0, 0.1});
  int count = 0;
  for (int r = 0; r < 63; ++r)
    for (int c = 0; c < 63; ++c) count += odd.at(r, c) == 1.0;
  EXPECT_EQ(count, 1);
  EXPECT_EQ(odd.at(31, 31), 1.0);
}

TEST(Elevation, TwoEqualFilesGiveEqualPeaks) {
  const auto g = terrain::build_elevation({{0.25, 0.5}, {0.75, 0.5}}, {50, 50}, {128, 0.002, 0.1});
  double left = 0, right = 0;
  for (int r = 0; r < 128; ++r)
    for (int c = 0; c < 128; ++c) {
      double& side = c < 64 ? left : right;
      side = std::max(side, g.at(r, c));
    }
  EXPECT_NEAR(left, right, 1e-9);
  EXPECT_NEAR(g.at(63, 31), g.at(63, 96), 1e-9);
}

TEST(Elevation, MassMatchesAnalyticIntegral) {
  // sigma >= 2 cells, peaks >= 3 sigma from the border.
  const int r = 128;
  const std::vector<Point> pos{{0.3, 0.3}, {0.7, 0.35}, {0.5, 0.7}, {0.25, 0.72}};
  const std::vector<double> loc{40, 120, 80, 60};
  const double sigma0 = 0.004;
  const auto g = terrain::accumulate_elevation(pos, loc, r, sigma0);
  double analytic = 0;
  const double cell_area = 1.0 / (r * r);
  for (double l : loc) {
    const double s = terrain::sigma_for(l, sigma0);
    ASSERT_GE(s, 2.0 / r);
    analytic += 2 * std::numbers::pi * s * s / cell_area;
  }
  EXPECT_NEAR(grid_sum(g) / analytic, 1.0, 0.02);
}

TEST(Elevation, SigmaRule) {
  EXPECT_DOUBLE_EQ(terrain::sigma_for(100, 0.002), 0.02);
  EXPECT_DOUBLE_EQ(terrain::sigma_for(0, 0.002), 0.002);
  EXPECT_NEAR(terrain::calibrate_sigma0({1, 4, 9, 16, 25}), 0.02 / 3.0, 1e-15);
}

TEST(Elevation, EmptyLayoutIsFlatZero) {
  const auto g = terrain::build_elevation({}, {}, {32, 0.0, 0.2});
  EXPECT_EQ(g.resolution, 32);
  EXPECT_EQ(g.seaLevel, 0.2);
  for (double h : g.heights) EXPECT_EQ(h, 0.0);
}

TEST(Elevation, RejectsBadInput) {
  EXPECT_THROW(terrain::accumulate_elevation({{0.5, 0.5}}, {1}, 8, 0.01), std::invalid_argument);
  EXPECT_THROW(terrain::accumulate_elevation({{0.5, 0.5}}, {1, 2}, 32, 0.01), std::invalid_argument);
  EXPECT_THROW(terrain::accumulate_elevation({{0.5, 0.5}}, {-1}, 32, 0.01), std::invalid_argument);
}

TEST(Elevation, MonotoneInFileSize) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  std::vector<Point> pos;
  std::vector<double> loc;
  for (int i = 0; i < 8; ++i) pos.push_back({u(rng), u(rng)}), loc.push_back(10 + 100 * u(rng));
  const auto before = terrain::accumulate_elevation(pos, loc, 64, 0.003);
  for (int i = 0; i < 8; ++i) {
    auto bigger = loc;
    bigger[i] *= 2.5;
    const auto after = terrain::accumulate_elevation(pos, bigger, 64, 0.003);
    for (std::size_t k = 0; k < before.heights.size(); ++k) EXPECT_GE(after.heights[k], before.heights[k] - 1e-15);
  }
}

TEST(Elevation, SingleFieldIsRadiallySymmetric) {
  const int r = 65;
  const double c = 32.5 / r;  // centre of cell (32, 32)
  const auto g = terrain::accumulate_elevation({{c, c}}, {200}, r, 0.003);
  for (int k = 1; k < 20; ++k) {
    const double v = g.at(32, 32 + k);
    EXPECT_NEAR(g.at(32, 32 - k), v, 1e-9);
    EXPECT_NEAR(g.at(32 + k, 32), v, 1e-9);
    EXPECT_NEAR(g.at(32 - k, 32), v, 1e-9);
  }
}

TEST(Elevation, Deterministic) {
  const std::vector<Point> pos{{0.2, 0.4}, {0.6, 0.6}};
  const auto a = terrain::build_elevation(pos, {10, 30}, {48, 0.0, 0.1});
  const auto b = terrain::build_elevation(pos, {10, 30}, {48, 0.0, 0.1});
  EXPECT_EQ(a.heights, b.heights);
}

TEST(SeaMask, BoundaryLevels) {
  const auto g = terrain::build_elevation({{0.3, 0.3}, {0.7, 0.6}}, {30, 90}, {64, 0.0, 0.1});
  for (bool land : terrain::sea_mask(g, 0.0)) EXPECT_TRUE(land);
  const auto top = terrain::sea_mask(g, std::nextafter(1.0, 0.0));
  for (std::size_t k = 0; k < top.size(); ++k) EXPECT_EQ(top[k], g.heights[k] == 1.0);
  EXPECT_THROW(terrain::sea_mask(g, 1.0), std::invalid_argument);
  EXPECT_THROW(terrain::sea_mask(g, -0.1), std::invalid_argument);
}

TEST(SeaMask, HalfLevelDiskMatchesAnalyticRadius) {
  const int r = 128;
  const double c = 64.5 / r;
  const double sigma0 = 0.002;
  const double loc = 100;
  const auto g = terrain::build_elevation({{c, c}}, {loc}, {r, sigma0, 0.5});
  const auto land = terrain::sea_mask(g, 0.5);
  const double radius = terrain::sigma_for(loc, sigma0) * std::sqrt(2 * std::log(2.0)) * r;  // in cells
  int area = 0;
  for (int row = 0; row < r; ++row)
    for (int col = 0; col < r; ++col) {
      const double dist = std::hypot(row - 64, col - 64);
      if (land[static_cast<std::size_t>(row) * r + col]) {
        ++area;
        EXPECT_LE(dist, radius + 1.0);
      } else {
        EXPECT_GE(dist, radius - 1.0);
      }
    }
  const double disk = std::numbers::pi * radius * radius;
  const double ring = 2 * std::numbers::pi * radius;
  EXPECT_NEAR(area, disk, ring);
}

TEST(SeaMask, RegionsAreFourConnected) {
  const auto g = terrain::build_elevation({{0.2, 0.2}, {0.8, 0.8}}, {50, 50}, {64, 0.003, 0.1});
  const auto land = terrain::sea_mask(g, 0.1);
  int count = 0;
  const auto regions = terrain::land_regions(g, land, &count);
  EXPECT_EQ(count, 2);
  for (std::size_t k = 0; k < land.size(); ++k) EXPECT_EQ(regions[k] >= 0, static_cast<bool>(land[k]));
}

TEST(Grid, JsonRoundTrip) {
  const auto g = terrain::build_elevation({{0.4, 0.5}}, {20}, {16, 0.0, 0.1});
  const auto j = terrain::to_json(g);
  EXPECT_EQ(j["resolution"], 16);
  EXPECT_EQ(j["heights"].size(), 256u);
  const auto back = terrain::grid_from_json(j);
  EXPECT_EQ(back.resolution, 16);
  for (std::size_t k = 0; k < g.heights.size(); ++k) EXPECT_NEAR(back.heights[k], g.heights[k], 5e-7);
  EXPECT_EQ(terrain::to_json(back).dump(), j.dump());
}
