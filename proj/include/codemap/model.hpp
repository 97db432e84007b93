#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "codemap/cartography.hpp"
#include "codemap/corpus.hpp"
#include "codemap/embedding.hpp"
#include "codemap/metricspace.hpp"
#include "codemap/terrain.hpp"
#include "codemap/xref.hpp"

namespace codemap::model {

inline constexpr int kFormatVersion = 1;

struct FileEntry {
  std::string path;
  double x = 0.0;
  double y = 0.0;
  int loc = 0;
};

struct MapMeta {
  int k = 0;
  double alpha = 0.6;
  std::uint64_t seed = 0;
  double sigma0 = 0.0;
  double softWeight = 10.0;
  std::string builtAt;
  std::string root;
  std::vector<std::string> include;
  std::vector<std::string> exclude;
  std::vector<std::string> languages{"java"};
  std::string layoutMode = "fresh";  // fresh | incremental | incomparable | anchored
};

/// The published map: layout, terrain and labels from one build.
struct MapModel {
  int formatVersion = kFormatVersion;
  std::vector<FileEntry> files;
  terrain::ElevationGrid grid;
  carto::LabelSet labels;
  MapMeta meta;

  std::vector<embed::Point> positions() const;
  std::vector<std::string> paths() const;
};

struct BuildConfig {
  corpus::ScanOptions scan{};
  double alpha = 0.6;
  int k = 0;
  std::uint64_t seed = 0;
  double softWeight = 10.0;
  int resolution = 512;
  double sigma0 = 0.0;
  double seaLevel = terrain::kDefaultSeaLevel;
  double margin = 0.05;
  carto::LabelOptions labels{};
  embed::SmacofOptions smacof{};
  /// Timestamp written to meta.builtAt; empty derives it from file mtimes.
  std::string builtAt;
};

/// Everything a build produces; the service keeps it to answer queries.
struct Build {
  corpus::Corpus corpus;
  corpus::VectorSpace vectors;
  xref::XrefGraph references;
  metric::DissimilarityMatrix dissimilarity;
  embed::LayoutResult layout;
  MapModel model;
};

metric::DissimilarityMatrix build_dissimilarity(const corpus::Corpus& c,
                                                const corpus::VectorSpace& vs,
                                                const xref::XrefGraph& refs, double alpha);

/// Terrain, labels and file table for a finished layout.
MapModel compose_model(const corpus::Corpus& c, const corpus::VectorSpace& vs,
                       const std::vector<embed::Point>& positions, const BuildConfig& cfg,
                       MapMeta meta);

/// Region keyword candidates: the two strongest aggregated tf-idf terms of
/// every land region that contains files.
std::vector<carto::Keyword> region_keywords(const corpus::VectorSpace& vs,
                                            const std::vector<embed::Point>& positions,
                                            const terrain::ElevationGrid& grid);

/// corpus -> metrics -> embedding -> terrain -> labels. With `prev`, the layout
/// is warm-started from it.
Build build_from_corpus(corpus::Corpus c, const BuildConfig& cfg,
                        const std::optional<MapModel>& prev = std::nullopt);
Build build_from_tree(const std::filesystem::path& root, const BuildConfig& cfg,
                      const std::optional<MapModel>& prev = std::nullopt);

/// Re-layout `b` with prefix anchors pulling matching files to targets.
MapModel anchored_model(const Build& b, const std::vector<embed::PrefixAnchor>& anchors,
                        const BuildConfig& cfg);

/// Latest mtime among the files, as ISO-8601 UTC (epoch for an empty tree).
std::string tree_timestamp(const std::filesystem::path& root, const corpus::Corpus& c);

nlohmann::json to_json(const MapModel& m);
MapModel model_from_json(const nlohmann::json& j);
std::string serialize(const MapModel& m);
MapModel load_model(const std::filesystem::path& file);
void save_model(const MapModel& m, const std::filesystem::path& file);
BuildConfig config_from_meta(const MapMeta& meta, BuildConfig base = {});

struct Displacement {
  std::string path;
  double distance = 0.0;
};

struct StabilityReport {
  std::vector<Displacement> files;  // shared paths, sorted
  double mean = 0.0;
  double max = 0.0;
  int added = 0;
  int removed = 0;
  bool incomparable = false;
};

StabilityReport diff(const MapModel& before, const MapModel& after);
nlohmann::json to_json(const StabilityReport& r);
std::string format_table(const StabilityReport& r);

}  // namespace codemap::model
