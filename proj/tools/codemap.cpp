// codemap: build, render, compare and serve software maps.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "codemap/model.hpp"
#include "codemap/service.hpp"

namespace fs = std::filesystem;
using namespace codemap;

namespace {

void write_json(const nlohmann::json& j, const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump() << "\n";
}

std::string read_text(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct BuildArgs {
  std::string root;
  std::string out;
  std::string prev;
  std::string layoutJson, corpusJson, matrixJson;
  model::BuildConfig cfg;
};

int run_build(const BuildArgs& a) {
  std::optional<model::MapModel> prev;
  if (!a.prev.empty()) prev = model::load_model(a.prev);
  const auto b = model::build_from_tree(a.root, a.cfg, prev);
  for (const auto& w : b.corpus.warnings) std::cerr << "warning: " << w.path << ": " << w.message << "\n";
  if (b.corpus.empty()) std::cerr << "warning: no source files found under " << a.root << "\n";
  if (b.layout.incomparable) std::cerr << "warning: previous model shares no files; fresh layout\n";
  model::save_model(b.model, a.out);
  if (!a.layoutJson.empty())
    write_json(embed::to_json(b.layout.layout, b.model.paths(),
                              {{"k", b.layout.k},
                               {"alpha", a.cfg.alpha},
                               {"softWeight", a.cfg.softWeight},
                               {"seed", a.cfg.seed}}),
               a.layoutJson);
  if (!a.corpusJson.empty()) write_json(corpus::to_json(b.corpus), a.corpusJson);
  if (!a.matrixJson.empty()) write_json(metric::to_json(b.dissimilarity), a.matrixJson);
  std::cerr << "wrote " << a.out << " (" << b.model.files.size() << " files)\n";
  return 0;
}

struct RenderArgs {
  std::string model;
  std::vector<std::string> overlays;
  std::string out;
  std::string root;
  std::string palette;
  std::string arrowheads = "targets";
  std::string searchMode = "plain";
  carto::RenderOptions opts;
};

int run_render(RenderArgs a) {
  std::vector<service::OverlaySpec> specs;
  try {
    for (const auto& s : a.overlays) specs.push_back(service::parse_overlay_spec(s));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const auto m = model::load_model(a.model);
  if (!a.palette.empty()) a.opts.palette = carto::palette_from_json(nlohmann::json::parse(read_text(a.palette)));
  if (a.arrowheads == "targets") a.opts.arrowheads = carto::ArrowHeads::targets;
  else if (a.arrowheads == "source") a.opts.arrowheads = carto::ArrowHeads::source;
  else a.opts.arrowheads = carto::ArrowHeads::none;

  std::optional<corpus::Corpus> snapshot;
  auto corpus_snapshot = [&]() -> const corpus::Corpus& {
    if (!snapshot) {
      const fs::path root = a.root.empty() ? fs::path(m.meta.root) : fs::path(a.root);
      snapshot = corpus::load_paths(root, m.paths(), m.meta.languages);
      for (const auto& w : snapshot->warnings) std::cerr << "warning: " << w.path << ": " << w.message << "\n";
    }
    return *snapshot;
  };

  std::vector<overlay::Overlay> layers;
  for (const auto& spec : specs) {
    switch (spec.kind) {
      case service::OverlaySpec::Kind::search: {
        const auto hits = xref::search(spec.argument, corpus_snapshot(), xref::parse_mode(a.searchMode));
        layers.push_back(service::search_overlay(hits));
        break;
      }
      case service::OverlaySpec::Kind::callers: {
        const auto r = service::callers_overlay(spec.argument, corpus_snapshot(), m.positions());
        if (r.tree) {
          layers.push_back(*r.tree);
        } else {
          overlay::MarkerLayer note;
          note.annotation = "callers \"" + spec.argument + "\": none";
          layers.push_back(note);
        }
        break;
      }
      case service::OverlaySpec::Kind::heat:
        layers.push_back(service::heat_overlay_from_csv(read_text(spec.argument), m));
        break;
    }
  }

  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + a.out);
  if (fs::path(a.out).extension() == ".png") {
    const auto png = carto::render_png(m, layers, a.opts);
    out.write(reinterpret_cast<const char*>(png.data()), static_cast<std::streamsize>(png.size()));
  } else {
    out << carto::render_svg(m, layers, a.opts);
  }
  return 0;
}

int run_diff(const std::string& before, const std::string& after, bool as_json, const std::string& out) {
  const auto report = model::diff(model::load_model(before), model::load_model(after));
  if (!out.empty()) write_json(model::to_json(report), out);
  if (as_json)
    std::cout << model::to_json(report).dump(2) << "\n";
  else
    std::cout << model::format_table(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"codemap: cartographic maps of source trees"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "scan a source tree and write a map model");
  b->add_option("dir", build.root, "source root")->required();
  b->add_option("-o,--output", build.out, "model JSON to write")->required();
  b->add_option("--prev", build.prev, "previous model for a stable incremental layout");
  b->add_option("--alpha", build.cfg.alpha, "structural weight in [0,1]")->check(CLI::Range(0.0, 1.0));
  b->add_option("--k", build.cfg.k, "Isomap neighbours (0: min(7, n-1))")->check(CLI::NonNegativeNumber);
  b->add_option("--seed", build.cfg.seed, "seed for randomized fallbacks");
  b->add_option("--soft-weight", build.cfg.softWeight, "soft anchor weight multiplier")->check(CLI::PositiveNumber);
  b->add_option("--resolution", build.cfg.resolution, "elevation grid cells per side")->check(CLI::Range(16, 8192));
  b->add_option("--sigma0", build.cfg.sigma0, "Gaussian width per sqrt(LOC) (0: auto)");
  b->add_option("--sea-level", build.cfg.seaLevel, "sea level in [0,1)");
  b->add_option("--max-labels", build.cfg.labels.maxLabels, "label budget");
  b->add_option("--include", build.cfg.scan.include, "include glob (repeatable)");
  b->add_option("--exclude", build.cfg.scan.exclude, "exclude glob (repeatable)");
  b->add_option("--language", build.cfg.scan.languages, "keyword stoplist: java, cpp, python (repeatable)");
  b->add_option("--built-at", build.cfg.builtAt, "timestamp recorded in meta.builtAt");
  b->add_option("--layout-json", build.layoutJson, "also write the layout JSON");
  b->add_option("--corpus-json", build.corpusJson, "also write the corpus JSON");
  b->add_option("--matrix-json", build.matrixJson, "also write the dissimilarity matrix JSON");

  RenderArgs render;
  auto* r = app.add_subcommand("render", "render a model to SVG (or PNG by extension)");
  r->add_option("model", render.model, "model JSON")->required();
  r->add_option("--overlay", render.overlays, std::string("overlay spec: ") + std::string(service::kOverlayForms));
  r->add_option("-o,--output", render.out, "output .svg or .png")->required();
  r->add_option("--root", render.root, "source root (default: the model's build root)");
  r->add_option("--size", render.opts.size, "output size in pixels")->check(CLI::Range(16, 16384));
  r->add_option("--palette", render.palette, "palette JSON");
  r->add_option("--contour-interval", render.opts.contourInterval, "contour spacing")->check(CLI::PositiveNumber);
  r->add_option("--light-azimuth", render.opts.light.azimuthDeg, "light azimuth in degrees");
  r->add_option("--light-altitude", render.opts.light.altitudeDeg, "light altitude in degrees");
  r->add_option("--z-scale", render.opts.light.zScale, "relief exaggeration");
  r->add_option("--arrowheads", render.arrowheads, "targets | source | none")
      ->check(CLI::IsMember({"targets", "source", "none"}));
  r->add_option("--search-mode", render.searchMode, "plain | identifier")
      ->check(CLI::IsMember({"plain", "identifier"}));

  std::string before, after, diff_out;
  bool diff_json = false;
  auto* d = app.add_subcommand("diff", "report layout displacement between two models");
  d->add_option("before", before, "older model")->required();
  d->add_option("after", after, "newer model")->required();
  d->add_flag("--json", diff_json, "print JSON instead of a table");
  d->add_option("-o,--output", diff_out, "also write the JSON report");

  std::string serve_model, serve_root, serve_host = "127.0.0.1", serve_assets;
  int serve_port = 8077;
  auto* s = app.add_subcommand("serve", "serve a model and overlay queries over HTTP");
  s->add_option("model", serve_model, "model JSON")->required();
  s->add_option("--root", serve_root, "source root (default: the model's build root)");
  s->add_option("--port", serve_port, "port")->check(CLI::Range(0, 65535));
  s->add_option("--host", serve_host, "bind address");
  s->add_option("--assets", serve_assets, "directory with viewer assets served at /");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*b) return run_build(build);
    if (*r) return run_render(render);
    if (*d) return run_diff(before, after, diff_json, diff_out);
    if (*s) {
      auto m = model::load_model(serve_model);
      const fs::path root = serve_root.empty() ? fs::path(m.meta.root) : fs::path(serve_root);
      auto svc = service::MapService::from_model(std::move(m), root, serve_assets);
      std::cerr << "serving on http://" << serve_host << ":" << serve_port << "\n";
      if (!svc->listen(serve_host, serve_port)) {
        std::cerr << "error: cannot listen on " << serve_host << ":" << serve_port << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
