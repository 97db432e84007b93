#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "codemap/model.hpp"
#include "codemap/overlays.hpp"
#include "codemap/xref.hpp"

namespace httplib {
class Server;
}

namespace codemap::service {

// ------------------------------------------------------------ overlay queries

/// Search hits as a marker layer; an empty result carries an annotation.
overlay::MarkerLayer search_overlay(const xref::SearchHits& hits);

struct CallersResult {
  int source = -1;
  std::vector<xref::CallerCount> callers;  // excludes the source file
  std::optional<overlay::FlowTree> tree;   // empty when nobody calls the symbol
};

CallersResult callers_overlay(std::string_view symbol, const corpus::Corpus& c,
                              const std::vector<embed::Point>& positions);

/// Parses `path,value` rows (header and blank lines tolerated). Unknown paths
/// are skipped. Throws std::invalid_argument on malformed rows.
overlay::HeatLayer heat_overlay_from_csv(std::string_view csv, const model::MapModel& m);

struct OverlaySpec {
  enum class Kind { search, callers, heat } kind;
  std::string argument;
};

inline constexpr std::string_view kOverlayForms = "search:<query>, callers:<symbol>, heat:<csvfile>";

/// Throws std::invalid_argument naming the valid forms.
OverlaySpec parse_overlay_spec(std::string_view spec);

// ------------------------------------------------------------ HTTP service

struct Response {
  int status = 200;
  std::string contentType = "application/json";
  std::string body;
};

/// Single-model service. Reads run against an immutable snapshot; anchor
/// rebuilds are serialized and swap the published snapshot atomically.
class MapService {
 public:
  MapService(model::Build build, model::BuildConfig cfg, std::filesystem::path assets = {});

  /// Rebuilds the corpus-side state of a saved model from its source tree.
  static std::unique_ptr<MapService> from_model(model::MapModel m, const std::filesystem::path& root,
                                                std::filesystem::path assets = {});

  Response get_map() const;
  Response get_search(const std::optional<std::string>& q, const std::optional<std::string>& mode) const;
  Response get_callers(const std::optional<std::string>& symbol) const;
  Response get_file(const std::optional<std::string>& path) const;
  Response post_anchors(const std::string& body);
  Response get_index() const;

  void register_routes(httplib::Server& server);
  /// Blocks until the server stops. Returns false if the port cannot be bound.
  bool listen(const std::string& host, int port);

  std::shared_ptr<const model::MapModel> published() const;

 private:
  struct Snapshot {
    model::MapModel model;
    std::string json;
  };
  std::shared_ptr<const Snapshot> snapshot() const;
  void publish(model::MapModel m);

  model::Build build_;
  model::BuildConfig cfg_;
  std::filesystem::path assets_;
  mutable std::mutex publish_mutex_;
  std::mutex rebuild_mutex_;
  std::shared_ptr<const Snapshot> current_;
};

Response json_error(int status, const std::string& message);

}  // namespace codemap::service
