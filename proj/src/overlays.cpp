#include "codemap/overlays.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "codemap/json_util.hpp"

namespace codemap::overlay {

using json_util::fixed6;

MarkerLayer marker_layer(const std::vector<Hit>& hits, const std::string& tag) {
  MarkerLayer layer;
  layer.markers.reserve(hits.size());
  for (const auto& h : hits) {
    if (h.count < 1) throw std::invalid_argument("marker_layer: counts must be >= 1");
    if (h.fileIndex < 0) throw std::invalid_argument("marker_layer: invalid file index");
    layer.markers.push_back({h.fileIndex, std::sqrt(static_cast<double>(h.count)), tag});
  }
  return layer;
}

HeatLayer heat_layer(const std::vector<Value>& values) {
  HeatLayer layer;
  if (values.empty()) return layer;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& v : values) {
    if (!std::isfinite(v.value)) throw std::invalid_argument("heat_layer: non-finite value");
    if (v.fileIndex < 0) throw std::invalid_argument("heat_layer: invalid file index");
    lo = std::min(lo, v.value);
    hi = std::max(hi, v.value);
  }
  for (const auto& v : values) {
    const double t = hi > lo ? (v.value - lo) / (hi - lo) : 0.5;
    layer.entries.push_back({v.fileIndex, std::clamp(t, 0.0, 1.0)});
  }
  return layer;
}

FlowTree flow_layer(int source, const std::vector<Target>& targets,
                    const std::vector<embed::Point>& positions, const FlowOptions& opts) {
  if (targets.empty()) throw std::invalid_argument("flow_layer: no targets");
  const int n = static_cast<int>(positions.size());
  if (source < 0 || source >= n) throw std::invalid_argument("flow_layer: invalid source index");
  for (const auto& t : targets) {
    if (t.fileIndex < 0 || t.fileIndex >= n) throw std::invalid_argument("flow_layer: invalid target index");
    if (!(t.weight > 0.0) || !std::isfinite(t.weight))
      throw std::invalid_argument("flow_layer: weights must be positive");
  }

  const embed::Point src = positions[source];
  FlowTree tree;
  tree.sourceFile = source;
  tree.nodes.push_back({src, 0.0, source});

  struct Cluster {
    std::vector<int> members;  // indices into targets
    int node;
    double flow;
  };
  std::vector<Cluster> clusters;
  for (int t = 0; t < static_cast<int>(targets.size()); ++t) {
    tree.nodes.push_back({positions[targets[t].fileIndex], targets[t].weight, targets[t].fileIndex});
    clusters.push_back({{t}, static_cast<int>(tree.nodes.size()) - 1, targets[t].weight});
  }
  std::vector<std::pair<int, int>> merges;  // (parent, child) collected bottom-up

  auto target_pos = [&](int t) { return positions[targets[t].fileIndex]; };
  // Single-linkage distances between live clusters, updated by min on merge.
  std::vector<std::vector<double>> link(clusters.size(), std::vector<double>(clusters.size()));
  for (std::size_t a = 0; a < clusters.size(); ++a)
    for (std::size_t b = 0; b < clusters.size(); ++b)
      link[a][b] = embed::distance(target_pos(static_cast<int>(a)), target_pos(static_cast<int>(b)));

  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 1;
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b)
        if (link[a][b] < best) {
          best = link[a][b];
          ba = a;
          bb = b;
        }
    embed::Point centroid{};
    double mass = 0.0;
    for (std::size_t c : {ba, bb})
      for (int t : clusters[c].members) {
        centroid.x += targets[t].weight * target_pos(t).x;
        centroid.y += targets[t].weight * target_pos(t).y;
        mass += targets[t].weight;
      }
    centroid = {centroid.x / mass, centroid.y / mass};
    if (best > opts.stopRatio * embed::distance(centroid, src)) break;

    const auto& ca = clusters[ba];
    const auto& cb = clusters[bb];
    const double flow = ca.flow + cb.flow;
    const auto& pa = tree.nodes[ca.node].pos;
    const auto& pb = tree.nodes[cb.node].pos;
    embed::Point p{(ca.flow * pa.x + cb.flow * pb.x) / flow, (ca.flow * pa.y + cb.flow * pb.y) / flow};
    p = {p.x + opts.pullToSource * (src.x - p.x), p.y + opts.pullToSource * (src.y - p.y)};
    tree.nodes.push_back({p, flow, -1});
    const int node = static_cast<int>(tree.nodes.size()) - 1;
    merges.push_back({node, ca.node});
    merges.push_back({node, cb.node});

    Cluster merged{ca.members, node, flow};
    merged.members.insert(merged.members.end(), cb.members.begin(), cb.members.end());
    for (std::size_t c = 0; c < clusters.size(); ++c)
      link[ba][c] = link[c][ba] = std::min(link[ba][c], link[bb][c]);
    link[ba][ba] = 0.0;
    link.erase(link.begin() + static_cast<long>(bb));
    for (auto& row : link) row.erase(row.begin() + static_cast<long>(bb));
    clusters.erase(clusters.begin() + static_cast<long>(bb));
    clusters[ba] = std::move(merged);
  }

  double total = 0.0;
  for (const auto& c : clusters) {
    tree.edges.push_back({0, c.node});
    total += c.flow;
  }
  tree.nodes[0].flow = total;
  // Top-down order: later merges sit closer to the root.
  for (auto it = merges.rbegin(); it != merges.rend(); it += 2) {
    tree.edges.push_back(*(it + 1));
    tree.edges.push_back(*it);
  }
  return tree;
}

double tree_length(const FlowTree& t) {
  double total = 0.0;
  for (const auto& [p, c] : t.edges) total += embed::distance(t.nodes[p].pos, t.nodes[c].pos);
  return total;
}

double straight_length(const FlowTree& t) {
  double total = 0.0;
  for (std::size_t i = 1; i < t.nodes.size(); ++i)
    if (t.nodes[i].fileIndex >= 0) total += embed::distance(t.nodes[0].pos, t.nodes[i].pos);
  return total;
}

nlohmann::json to_json(const Overlay& o) {
  return std::visit(
      [](const auto& layer) -> nlohmann::json {
        using T = std::decay_t<decltype(layer)>;
        if constexpr (std::is_same_v<T, MarkerLayer>) {
          nlohmann::json markers = nlohmann::json::array();
          for (const auto& m : layer.markers)
            markers.push_back(
                {{"fileIndex", m.fileIndex}, {"magnitude", fixed6(m.magnitude)}, {"tag", m.tag}});
          nlohmann::json j{{"kind", "markers"}, {"markers", markers}};
          if (!layer.annotation.empty()) j["annotation"] = layer.annotation;
          return j;
        } else if constexpr (std::is_same_v<T, HeatLayer>) {
          nlohmann::json entries = nlohmann::json::array();
          for (const auto& e : layer.entries)
            entries.push_back({{"fileIndex", e.fileIndex}, {"intensity", fixed6(e.intensity)}});
          return {{"kind", "heat"}, {"entries", entries}};
        } else {
          nlohmann::json nodes = nlohmann::json::array();
          for (const auto& n : layer.nodes)
            nodes.push_back({{"x", fixed6(n.pos.x)},
                             {"y", fixed6(n.pos.y)},
                             {"flow", fixed6(n.flow)},
                             {"fileIndex", n.fileIndex}});
          nlohmann::json edges = nlohmann::json::array();
          for (const auto& [p, c] : layer.edges) edges.push_back({p, c});
          const auto& s = layer.nodes.front().pos;
          return {{"kind", "flow"},
                  {"source", {{"x", fixed6(s.x)}, {"y", fixed6(s.y)}}},
                  {"sourceFile", layer.sourceFile},
                  {"nodes", nodes},
                  {"edges", edges}};
        }
      },
      o);
}

}  // namespace codemap::overlay
