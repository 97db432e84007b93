#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "codemap/embedding.hpp"

namespace codemap::overlay {

struct Marker {
  int fileIndex = 0;
  double magnitude = 0.0;
  std::string tag;
};

struct MarkerLayer {
  std::vector<Marker> markers;
  std::string annotation;  // shown by renderers, e.g. "search \"x\": 0 results"
};

struct HeatEntry {
  int fileIndex = 0;
  double intensity = 0.0;
};

struct HeatLayer {
  std::vector<HeatEntry> entries;
};

struct FlowNode {
  embed::Point pos;
  double flow = 0.0;
  int fileIndex = -1;  // target file for leaves, source file for the root, -1 inside
};

/// Arrow tree rooted at nodes[0] (the source). Leaves are targets.
struct FlowTree {
  int sourceFile = -1;
  std::vector<FlowNode> nodes;
  std::vector<std::pair<int, int>> edges;  // (parent, child), parents listed before children
};

using Overlay = std::variant<MarkerLayer, HeatLayer, FlowTree>;

struct Hit {
  int fileIndex = 0;
  int count = 0;
};

/// magnitude = sqrt(count). Throws std::invalid_argument for counts < 1.
MarkerLayer marker_layer(const std::vector<Hit>& hits, const std::string& tag = {});

struct Value {
  int fileIndex = 0;
  double value = 0.0;
};

/// Min-max normalization into [0,1]; constant input maps to 0.5. Throws on
/// non-finite values.
HeatLayer heat_layer(const std::vector<Value>& values);

struct Target {
  int fileIndex = 0;
  double weight = 1.0;
};

struct FlowOptions {
  double stopRatio = 0.5;     // merge while min linkage <= stopRatio * |centroid - source|
  double pullToSource = 0.25;
};

/// Agglomerative single-linkage merge of targets into shared trunks. Throws
/// std::invalid_argument for empty targets, invalid indices, or weights <= 0.
FlowTree flow_layer(int source, const std::vector<Target>& targets,
                    const std::vector<embed::Point>& positions, const FlowOptions& opts = {});

double tree_length(const FlowTree& t);
/// Sum over targets of the straight source -> target segment lengths.
double straight_length(const FlowTree& t);

nlohmann::json to_json(const Overlay& o);

}  // namespace codemap::overlay
