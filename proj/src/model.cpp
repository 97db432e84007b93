#include "codemap/model.hpp"

#include <sys/stat.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "codemap/json_util.hpp"

namespace codemap::model {

using json_util::fixed6;

std::vector<embed::Point> MapModel::positions() const {
  std::vector<embed::Point> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back({f.x, f.y});
  return out;
}

std::vector<std::string> MapModel::paths() const {
  std::vector<std::string> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(f.path);
  return out;
}

metric::DissimilarityMatrix build_dissimilarity(const corpus::Corpus& c,
                                                const corpus::VectorSpace& vs,
                                                const xref::XrefGraph& refs, double alpha) {
  (void)c;
  return metric::blend(metric::lexical_dissimilarity(vs), metric::reference_distance(refs), alpha);
}

std::vector<carto::Keyword> region_keywords(const corpus::VectorSpace& vs,
                                            const std::vector<embed::Point>& positions,
                                            const terrain::ElevationGrid& grid) {
  std::vector<carto::Keyword> out;
  if (positions.empty() || grid.resolution <= 0) return out;
  int regions = 0;
  const auto land = terrain::sea_mask(grid, grid.seaLevel);
  const auto label = terrain::land_regions(grid, land, &regions);
  const int r = grid.resolution;

  std::vector<std::map<std::string, double>> scores(static_cast<std::size_t>(regions));
  std::vector<embed::Point> centre(static_cast<std::size_t>(regions));
  std::vector<int> members(static_cast<std::size_t>(regions), 0);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const int col = std::clamp(static_cast<int>(std::floor(positions[i].x * r)), 0, r - 1);
    const int row = std::clamp(static_cast<int>(std::floor(positions[i].y * r)), 0, r - 1);
    const int region = label[static_cast<std::size_t>(row) * r + col];
    if (region < 0) continue;
    for (const auto& [term, w] : vs.vectors[i]) scores[region][term] += w;
    centre[region].x += positions[i].x;
    centre[region].y += positions[i].y;
    ++members[region];
  }
  for (int region = 0; region < regions; ++region) {
    if (members[region] == 0 || scores[region].empty()) continue;
    std::vector<std::pair<std::string, double>> ranked(scores[region].begin(), scores[region].end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    const embed::Point c{centre[region].x / members[region], centre[region].y / members[region]};
    for (std::size_t t = 0; t < std::min<std::size_t>(2, ranked.size()); ++t)
      out.push_back({ranked[t].first, ranked[t].second, {c.x, c.y + 0.04 * static_cast<double>(t)}});
  }
  return out;
}

MapModel compose_model(const corpus::Corpus& c, const corpus::VectorSpace& vs,
                       const std::vector<embed::Point>& positions, const BuildConfig& cfg,
                       MapMeta meta) {
  if (positions.size() != c.size()) throw std::invalid_argument("compose_model: layout/corpus mismatch");
  MapModel m;
  std::vector<embed::Point> rounded;
  std::vector<double> sizes;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const embed::Point p{fixed6(positions[i].x), fixed6(positions[i].y)};
    rounded.push_back(p);
    sizes.push_back(static_cast<double>(c.files[i].loc));
    m.files.push_back({c.files[i].path, p.x, p.y, c.files[i].loc});
  }
  const double sigma0 = cfg.sigma0 > 0.0 ? cfg.sigma0 : terrain::calibrate_sigma0(sizes);
  m.grid = terrain::build_elevation(rounded, sizes, {cfg.resolution, sigma0, cfg.seaLevel});
  // Labels and keywords read the grid exactly as it will be serialized.
  for (auto& h : m.grid.heights) h = fixed6(h);

  std::vector<carto::LabelFile> label_files;
  for (std::size_t i = 0; i < c.size(); ++i)
    label_files.push_back({c.files[i].basename, static_cast<double>(c.files[i].loc), rounded[i]});
  m.labels = carto::place_labels(label_files, region_keywords(vs, rounded, m.grid), cfg.labels);
  meta.sigma0 = fixed6(sigma0);
  m.meta = std::move(meta);
  return m;
}

namespace {

embed::LayoutOptions layout_options(const BuildConfig& cfg) {
  embed::LayoutOptions o;
  o.k = cfg.k;
  o.seed = cfg.seed;
  o.margin = cfg.margin;
  o.softWeight = cfg.softWeight;
  o.smacof = cfg.smacof;
  return o;
}

MapMeta base_meta(const BuildConfig& cfg) {
  MapMeta meta;
  meta.alpha = cfg.alpha;
  meta.seed = cfg.seed;
  meta.softWeight = cfg.softWeight;
  meta.builtAt = cfg.builtAt;
  meta.include = cfg.scan.include;
  meta.exclude = cfg.scan.exclude;
  meta.languages = cfg.scan.languages;
  return meta;
}

std::string iso_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Build build_from_corpus(corpus::Corpus c, const BuildConfig& cfg, const std::optional<MapModel>& prev) {
  Build b;
  b.corpus = std::move(c);
  b.vectors = corpus::build_vectors(b.corpus);
  b.references = xref::extract_references(b.corpus);
  b.dissimilarity = build_dissimilarity(b.corpus, b.vectors, b.references, cfg.alpha);

  MapMeta meta = base_meta(cfg);
  const auto opts = layout_options(cfg);
  if (prev) {
    b.layout = embed::incremental_layout({prev->paths(), prev->positions()}, b.dissimilarity, opts);
    meta.layoutMode = b.layout.incomparable ? "incomparable" : "incremental";
  } else {
    b.layout = embed::compute_layout(b.dissimilarity, opts);
  }
  meta.k = b.layout.k;
  b.model = compose_model(b.corpus, b.vectors, b.layout.layout.positions, cfg, std::move(meta));
  return b;
}

Build build_from_tree(const std::filesystem::path& root, const BuildConfig& cfg,
                      const std::optional<MapModel>& prev) {
  corpus::Corpus c = corpus::scan_tree(root, cfg.scan);
  BuildConfig resolved = cfg;
  if (resolved.builtAt.empty()) resolved.builtAt = tree_timestamp(root, c);
  Build b = build_from_corpus(std::move(c), resolved, prev);
  std::error_code ec;
  const auto abs = std::filesystem::weakly_canonical(root, ec);
  b.model.meta.root = ec ? root.string() : abs.string();
  return b;
}

MapModel anchored_model(const Build& b, const std::vector<embed::PrefixAnchor>& anchors,
                        const BuildConfig& cfg) {
  if (anchors.empty()) return b.model;
  const auto result =
      embed::anchored_layout(b.dissimilarity, b.layout.layout, anchors, layout_options(cfg));
  MapMeta meta = b.model.meta;
  meta.layoutMode = "anchored";
  return compose_model(b.corpus, b.vectors, result.layout.positions, cfg, std::move(meta));
}

std::string tree_timestamp(const std::filesystem::path& root, const corpus::Corpus& c) {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch)
    return iso_utc(static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10)));
  std::time_t latest = 0;
  for (const auto& f : c.files) {
    struct stat st {};
    if (::stat((root / f.path).c_str(), &st) == 0) latest = std::max(latest, st.st_mtime);
  }
  return iso_utc(latest);
}

nlohmann::json to_json(const MapModel& m) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : m.files)
    files.push_back({{"path", f.path}, {"x", fixed6(f.x)}, {"y", fixed6(f.y)}, {"loc", f.loc}});
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& l : m.labels) labels.push_back(carto::to_json(l));
  const auto& mt = m.meta;
  nlohmann::json meta{{"k", mt.k},
                      {"alpha", fixed6(mt.alpha)},
                      {"seed", mt.seed},
                      {"sigma0", fixed6(mt.sigma0)},
                      {"softWeight", fixed6(mt.softWeight)},
                      {"builtAt", mt.builtAt},
                      {"root", mt.root},
                      {"include", mt.include},
                      {"exclude", mt.exclude},
                      {"languages", mt.languages},
                      {"layoutMode", mt.layoutMode}};
  return {{"formatVersion", m.formatVersion},
          {"files", files},
          {"grid", terrain::to_json(m.grid)},
          {"labels", labels},
          {"meta", meta}};
}

MapModel model_from_json(const nlohmann::json& j) {
  MapModel m;
  m.formatVersion = j.at("formatVersion").get<int>();
  if (m.formatVersion != kFormatVersion)
    throw std::invalid_argument("unsupported map formatVersion " + std::to_string(m.formatVersion));
  for (const auto& f : j.at("files"))
    m.files.push_back({f.at("path").get<std::string>(), f.at("x").get<double>(),
                       f.at("y").get<double>(), f.at("loc").get<int>()});
  m.grid = terrain::grid_from_json(j.at("grid"));
  for (const auto& l : j.at("labels")) m.labels.push_back(carto::label_from_json(l));
  const auto& meta = j.at("meta");
  m.meta.k = meta.value("k", 0);
  m.meta.alpha = meta.value("alpha", 0.6);
  m.meta.seed = meta.value("seed", std::uint64_t{0});
  m.meta.sigma0 = meta.value("sigma0", 0.0);
  m.meta.softWeight = meta.value("softWeight", 10.0);
  m.meta.builtAt = meta.value("builtAt", std::string{});
  m.meta.root = meta.value("root", std::string{});
  m.meta.include = meta.value("include", std::vector<std::string>{});
  m.meta.exclude = meta.value("exclude", std::vector<std::string>{});
  m.meta.languages = meta.value("languages", std::vector<std::string>{"java"});
  m.meta.layoutMode = meta.value("layoutMode", std::string{"fresh"});
  return m;
}

std::string serialize(const MapModel& m) { return to_json(m).dump() + "\n"; }

MapModel load_model(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open map model: " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed map model " + file.string() + ": " + e.what());
  }
  return model_from_json(j);
}

void save_model(const MapModel& m, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write map model: " + file.string());
  out << serialize(m);
}

BuildConfig config_from_meta(const MapMeta& meta, BuildConfig base) {
  base.alpha = meta.alpha;
  base.k = meta.k;
  base.seed = meta.seed;
  base.softWeight = meta.softWeight;
  base.builtAt = meta.builtAt;
  base.scan.include = meta.include;
  base.scan.exclude = meta.exclude;
  base.scan.languages = meta.languages;
  return base;
}

StabilityReport diff(const MapModel& before, const MapModel& after) {
  StabilityReport r;
  std::map<std::string, embed::Point> old_pos;
  for (const auto& f : before.files) old_pos[f.path] = {f.x, f.y};
  std::map<std::string, embed::Point> new_pos;
  for (const auto& f : after.files) new_pos[f.path] = {f.x, f.y};
  for (const auto& [path, p] : new_pos) {
    auto it = old_pos.find(path);
    if (it == old_pos.end()) {
      ++r.added;
      continue;
    }
    const double d = embed::distance(it->second, p);
    r.files.push_back({path, d});
    r.mean += d;
    r.max = std::max(r.max, d);
  }
  for (const auto& [path, p] : old_pos)
    if (!new_pos.count(path)) ++r.removed;
  r.incomparable = r.files.empty();
  if (!r.files.empty()) r.mean /= static_cast<double>(r.files.size());
  return r;
}

nlohmann::json to_json(const StabilityReport& r) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& d : r.files) files.push_back({{"path", d.path}, {"displacement", fixed6(d.distance)}});
  return {{"files", files},
          {"meanDisplacement", fixed6(r.mean)},
          {"maxDisplacement", fixed6(r.max)},
          {"added", r.added},
          {"removed", r.removed},
          {"incomparable", r.incomparable}};
}

std::string format_table(const StabilityReport& r) {
  std::ostringstream out;
  if (r.incomparable) out << "models share no files: incomparable\n";
  std::size_t width = 4;
  for (const auto& d : r.files) width = std::max(width, d.path.size());
  char buf[64];
  out << "path" << std::string(width - 4 + 2, ' ') << "displacement\n";
  for (const auto& d : r.files) {
    std::snprintf(buf, sizeof buf, "%.6f", d.distance);
    out << d.path << std::string(width - d.path.size() + 2, ' ') << buf << "\n";
  }
  std::snprintf(buf, sizeof buf, "%.6f", r.mean);
  out << "mean displacement: " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.6f", r.max);
  out << "max displacement:  " << buf << "\n";
  out << "added: " << r.added << "  removed: " << r.removed << "\n";
  return out.str();
}

}  // namespace codemap::model
