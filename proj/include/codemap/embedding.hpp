#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "codemap/metricspace.hpp"

namespace codemap::embed {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

struct Layout {
  std::vector<Point> positions;
  std::vector<double> stressTrace;
  std::uint64_t seed = 0;

  std::size_t size() const { return positions.size(); }
};

enum class AnchorMode { hard, soft };

/// Files pinned (hard) or pulled (soft) toward fixed positions.
struct AnchorSet {
  std::map<int, Point> entries;
  double softWeight = 10.0;
  AnchorMode mode = AnchorMode::hard;
};

/// Undirected weighted graph; `adjacency[i]` holds (neighbor, weight) sorted by neighbor.
struct NeighborGraph {
  std::vector<std::vector<std::pair<int, double>>> adjacency;
  std::vector<std::string> labels;

  int n() const { return static_cast<int>(adjacency.size()); }
  bool has_edge(int a, int b) const;
  std::size_t edge_count() const;
};

int default_k(int n);

/// k nearest neighbors per node (ties by lower index), symmetrized, then made
/// connected by repeatedly adding the globally shortest inter-component pair.
NeighborGraph knn_graph(const metric::DissimilarityMatrix& d, int k);
bool is_connected(const NeighborGraph& g);

/// All-pairs shortest path lengths. Throws std::invalid_argument if `g` is
/// disconnected.
metric::DissimilarityMatrix geodesic_distances(const NeighborGraph& g);

/// Torgerson scaling onto the top two eigenvectors. Each axis is flipped so
/// its largest-magnitude component is positive.
Layout classical_mds(const metric::DissimilarityMatrix& d);

struct SmacofOptions {
  int maxIter = 300;
  double epsRel = 1e-6;
  /// Optional pair weights (n x n, symmetric, >= 0); empty means all ones.
  Eigen::MatrixXd weights;
};

/// Raw stress sum_{i<j} w_ij (|x_i - x_j| - delta_ij)^2.
double stress(const Eigen::MatrixXd& delta, const std::vector<Point>& x,
              const Eigen::MatrixXd& weights = {});

/// Stress majorization by Guttman transforms. The trace starts with the stress
/// of the (anchor-adjusted) start configuration; an iteration whose relative
/// improvement falls below epsRel ends the run and is not applied.
Layout smacof(const metric::DissimilarityMatrix& d, const Layout& init,
              const std::optional<AnchorSet>& anchors = std::nullopt,
              const SmacofOptions& opts = {});

/// Uniform scale + translation into [margin, 1 - margin]^2, centred along the
/// shorter side. All-coincident input lands at (0.5, 0.5).
Layout normalize_layout(const Layout& l, double margin = 0.05);

/// Like normalize_layout but never enlarges: shrinks about the centroid only
/// when the box is too wide, then shifts it inside the margins.
/// A layout that already fits is returned unchanged.
Layout fit_layout(const Layout& l, double margin = 0.05);

struct LayoutOptions {
  int k = 0;  // 0: default_k(n)
  std::uint64_t seed = 0;
  double margin = 0.05;
  double softWeight = 10.0;
  SmacofOptions smacof{};
};

struct LayoutResult {
  Layout layout;
  int k = 0;
  bool fresh = true;       // no previous layout was reused
  bool incomparable = false;  // previous layout shared no files
};

/// Isomap seeding (kNN geodesics + classical MDS), SMACOF refinement on the
/// original dissimilarities, normalization into the unit square.
LayoutResult compute_layout(const metric::DissimilarityMatrix& d, const LayoutOptions& opts = {});

struct LabeledLayout {
  std::vector<std::string> labels;
  std::vector<Point> positions;
};

/// Warm-started re-layout: survivors start at their previous positions and are
/// tethered to them with weight softWeight; new files start near their closest
/// survivors. Falls back to compute_layout (incomparable = true) when no path
/// survives. New files that land outside the unit square are clamped to its
/// edge; the rest is fitted (fit_layout, margin 0) rather than re-stretched,
/// so survivors only move when one of them would leave the square.
LayoutResult incremental_layout(const LabeledLayout& prev, const metric::DissimilarityMatrix& d,
                                const LayoutOptions& opts = {});

struct PrefixAnchor {
  std::string pathPrefix;
  Point target;
};

/// Pulls every file matching each prefix toward its target. `base` is an
/// unanchored unit-square layout of `d`. Matching happens on `d.labels`.
/// Throws std::invalid_argument for targets outside the unit square or
/// prefixes that match nothing.
LayoutResult anchored_layout(const metric::DissimilarityMatrix& d, const Layout& base,
                             const std::vector<PrefixAnchor>& anchors,
                             const LayoutOptions& opts = {});

nlohmann::json to_json(const Layout& l, const std::vector<std::string>& labels,
                       const nlohmann::json& meta);

}  // namespace codemap::embed
