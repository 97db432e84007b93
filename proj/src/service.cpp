#include "codemap/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace codemap::service {

overlay::MarkerLayer search_overlay(const xref::SearchHits& hits) {
  std::vector<overlay::Hit> counts;
  for (const auto& f : hits.files) counts.push_back({f.fileIndex, f.count});
  auto layer = overlay::marker_layer(counts, hits.query);
  if (hits.files.empty()) layer.annotation = "search \"" + hits.query + "\": 0 results";
  return layer;
}

CallersResult callers_overlay(std::string_view symbol, const corpus::Corpus& c,
                              const std::vector<embed::Point>& positions) {
  CallersResult r;
  r.source = xref::declaring_file(symbol, c);
  if (r.source < 0) return r;
  const auto hash = symbol.find('#');
  const auto member = hash == std::string_view::npos ? symbol : symbol.substr(hash + 1);
  for (const auto& hit : xref::callers_of(member, c))
    if (hit.fileIndex != r.source) r.callers.push_back(hit);
  if (r.callers.empty()) return r;
  std::vector<overlay::Target> targets;
  for (const auto& hit : r.callers) targets.push_back({hit.fileIndex, static_cast<double>(hit.count)});
  r.tree = overlay::flow_layer(r.source, targets, positions);
  return r;
}

overlay::HeatLayer heat_overlay_from_csv(std::string_view csv, const model::MapModel& m) {
  std::vector<overlay::Value> values;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < m.files.size(); ++i) index[m.files[i].path] = static_cast<int>(i);
  std::size_t start = 0;
  int line_no = 0;
  while (start <= csv.size()) {
    auto end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    std::string line(csv.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw std::invalid_argument("heat csv line " + std::to_string(line_no) + ": expected path,value");
    const std::string path = line.substr(0, comma);
    std::string num = line.substr(comma + 1);
    num.erase(0, num.find_first_not_of(" \t"));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc() || ptr != num.data() + num.size() || !std::isfinite(value)) {
      if (line_no == 1) continue;  // header row
      throw std::invalid_argument("heat csv line " + std::to_string(line_no) + ": bad value '" + num + "'");
    }
    if (auto it = index.find(path); it != index.end()) values.push_back({it->second, value});
  }
  return overlay::heat_layer(values);
}

OverlaySpec parse_overlay_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  auto fail = [&] {
    return std::invalid_argument("malformed overlay '" + std::string(spec) + "'; valid forms: " +
                                 std::string(kOverlayForms));
  };
  if (colon == std::string_view::npos || colon + 1 == spec.size()) throw fail();
  const auto kind = spec.substr(0, colon);
  std::string arg(spec.substr(colon + 1));
  if (kind == "search") return {OverlaySpec::Kind::search, arg};
  if (kind == "callers") return {OverlaySpec::Kind::callers, arg};
  if (kind == "heat") return {OverlaySpec::Kind::heat, arg};
  throw fail();
}

Response json_error(int status, const std::string& message) {
  return {status, "application/json", nlohmann::json{{"error", message}, {"status", status}}.dump()};
}

namespace {

constexpr const char* kIndexPage = R"(<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>codemap</title></head>
<body>
<h1>codemap service</h1>
<p>No viewer assets are mounted. Start the service with <code>--assets DIR</code> to serve the map viewer.</p>
<ul>
<li><a href="/api/map">/api/map</a></li>
<li>/api/search?q=TEXT&amp;mode=plain|identifier</li>
<li>/api/callers?symbol=NAME</li>
<li>/api/file?path=PATH</li>
<li>POST /api/anchors [{"pathPrefix": "...", "x": 0.5, "y": 0.5}]</li>
</ul>
</body>
</html>
)";

std::optional<std::string> param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.contentType.c_str());
}

}  // namespace

MapService::MapService(model::Build build, model::BuildConfig cfg, std::filesystem::path assets)
    : build_(std::move(build)), cfg_(std::move(cfg)), assets_(std::move(assets)) {
  publish(build_.model);
}

std::unique_ptr<MapService> MapService::from_model(model::MapModel m, const std::filesystem::path& root,
                                                   std::filesystem::path assets) {
  model::BuildConfig cfg = model::config_from_meta(m.meta);
  cfg.resolution = m.grid.resolution;
  cfg.seaLevel = m.grid.seaLevel;

  model::Build b;
  b.corpus = corpus::load_paths(root, m.paths(), cfg.scan.languages);
  b.vectors = corpus::build_vectors(b.corpus);
  b.references = xref::extract_references(b.corpus);
  b.dissimilarity = model::build_dissimilarity(b.corpus, b.vectors, b.references, cfg.alpha);
  b.layout.k = m.meta.k;
  b.layout.fresh = false;
  b.layout.layout.positions = m.positions();
  b.layout.layout.seed = m.meta.seed;
  b.model = std::move(m);
  return std::make_unique<MapService>(std::move(b), std::move(cfg), std::move(assets));
}

std::shared_ptr<const MapService::Snapshot> MapService::snapshot() const {
  std::lock_guard lock(publish_mutex_);
  return current_;
}

std::shared_ptr<const model::MapModel> MapService::published() const {
  auto snap = snapshot();
  return {snap, &snap->model};
}

void MapService::publish(model::MapModel m) {
  auto snap = std::make_shared<Snapshot>();
  snap->json = model::serialize(m);
  snap->model = std::move(m);
  std::lock_guard lock(publish_mutex_);
  current_ = std::move(snap);
}

Response MapService::get_map() const { return {200, "application/json", snapshot()->json}; }

Response MapService::get_search(const std::optional<std::string>& q,
                                const std::optional<std::string>& mode) const {
  if (!q || q->empty()) return json_error(400, "missing query parameter q");
  xref::SearchMode m;
  try {
    m = xref::parse_mode(mode.value_or("plain"));
  } catch (const std::invalid_argument& e) {
    return json_error(400, e.what());
  }
  const auto hits = xref::search(*q, build_.corpus, m);
  nlohmann::json body = xref::to_json(hits);
  body["total"] = std::accumulate(hits.files.begin(), hits.files.end(), 0,
                                  [](int acc, const xref::FileHits& f) { return acc + f.count; });
  body["markers"] = overlay::to_json(search_overlay(hits));
  return {200, "application/json", body.dump()};
}

Response MapService::get_callers(const std::optional<std::string>& symbol) const {
  if (!symbol || symbol->empty()) return json_error(400, "missing query parameter symbol");
  const auto snap = snapshot();
  const auto r = callers_overlay(*symbol, build_.corpus, snap->model.positions());
  if (!r.tree) return json_error(404, "no callers for symbol '" + *symbol + "'");
  nlohmann::json body = overlay::to_json(*r.tree);
  body["symbol"] = *symbol;
  nlohmann::json callers = nlohmann::json::array();
  for (const auto& c : r.callers)
    callers.push_back({{"fileIndex", c.fileIndex}, {"path", build_.corpus.files[c.fileIndex].path}, {"count", c.count}});
  body["callers"] = callers;
  return {200, "application/json", body.dump()};
}

Response MapService::get_file(const std::optional<std::string>& path) const {
  if (!path) return json_error(400, "missing query parameter path");
  const int idx = build_.corpus.index_of(*path);
  if (idx < 0) return json_error(404, "not a corpus file: " + *path);
  return {200, "text/plain; charset=utf-8", build_.corpus.files[idx].content};
}

Response MapService::post_anchors(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    return json_error(400, std::string("anchor body is not JSON: ") + e.what());
  }
  if (!j.is_array()) return json_error(400, "anchor body must be an array of {pathPrefix, x, y}");
  std::vector<embed::PrefixAnchor> anchors;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& a = j[i];
    const std::string where = "anchor " + std::to_string(i) + ": ";
    if (!a.is_object()) return json_error(400, where + "expected an object");
    if (!a.contains("pathPrefix") || !a["pathPrefix"].is_string())
      return json_error(400, where + "pathPrefix must be a string");
    if (!a.contains("x") || !a["x"].is_number() || !a.contains("y") || !a["y"].is_number())
      return json_error(400, where + "x and y must be numbers");
    anchors.push_back({a["pathPrefix"].get<std::string>(), {a["x"].get<double>(), a["y"].get<double>()}});
  }

  std::lock_guard rebuild(rebuild_mutex_);
  try {
    publish(model::anchored_model(build_, anchors, cfg_));
  } catch (const std::invalid_argument& e) {
    return json_error(400, e.what());
  }
  return get_map();
}

Response MapService::get_index() const { return {200, "text/html; charset=utf-8", kIndexPage}; }

void MapService::register_routes(httplib::Server& server) {
  server.Get("/api/map", [this](const httplib::Request&, httplib::Response& res) { reply(res, get_map()); });
  server.Get("/api/search", [this](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_search(param(req, "q"), param(req, "mode")));
  });
  server.Get("/api/callers", [this](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_callers(param(req, "symbol")));
  });
  server.Get("/api/file", [this](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_file(param(req, "path")));
  });
  server.Post("/api/anchors", [this](const httplib::Request& req, httplib::Response& res) {
    reply(res, post_anchors(req.body));
  });
  if (!assets_.empty() && std::filesystem::is_directory(assets_)) {
    server.set_mount_point("/", assets_.string());
  } else {
    server.Get("/", [this](const httplib::Request&, httplib::Response& res) { reply(res, get_index()); });
  }
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) reply(res, json_error(res.status, "not found"));
  });
}

bool MapService::listen(const std::string& host, int port) {
  httplib::Server server;
  register_routes(server);
  return server.listen(host, port);
}

}  // namespace codemap::service
