#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "codemap/cartography.hpp"
#include "codemap/model.hpp"
#include "codemap/service.hpp"

namespace py = pybind11;
using namespace codemap;

namespace {

model::MapModel parse_model(const std::string& text) { return model::model_from_json(nlohmann::json::parse(text)); }

std::string build(const std::string& root, double alpha, int k, std::uint64_t seed, int resolution,
                  const std::optional<std::string>& prev, const std::string& built_at) {
  model::BuildConfig cfg;
  cfg.alpha = alpha;
  cfg.k = k;
  cfg.seed = seed;
  cfg.resolution = resolution;
  cfg.builtAt = built_at;
  std::optional<model::MapModel> previous;
  if (prev) previous = parse_model(*prev);
  py::gil_scoped_release release;
  return model::serialize(model::build_from_tree(root, cfg, previous).model);
}

carto::RenderOptions render_options(int size, double contour_interval, double azimuth, double altitude) {
  carto::RenderOptions opts;
  opts.size = size;
  opts.contourInterval = contour_interval;
  opts.light.azimuthDeg = azimuth;
  opts.light.altitudeDeg = altitude;
  return opts;
}

/// Server-side handlers without the socket, for scripting and tests.
class Map {
 public:
  Map(const std::string& model_json, const std::string& root)
      : svc_(service::MapService::from_model(parse_model(model_json), root)) {}

  py::tuple map() const { return wrap(svc_->get_map()); }
  py::tuple search(std::optional<std::string> q, std::optional<std::string> mode) const {
    return wrap(svc_->get_search(q, mode));
  }
  py::tuple callers(std::optional<std::string> symbol) const { return wrap(svc_->get_callers(symbol)); }
  py::tuple file(std::optional<std::string> path) const { return wrap(svc_->get_file(path)); }
  py::tuple anchors(const std::string& body) {
    service::Response r;
    {
      py::gil_scoped_release release;
      r = svc_->post_anchors(body);
    }
    return wrap(r);
  }

 private:
  static py::tuple wrap(const service::Response& r) {
    return py::make_tuple(r.status, r.contentType, py::bytes(r.body));
  }
  std::unique_ptr<service::MapService> svc_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "codemap core bindings";
  m.attr("FORMAT_VERSION") = model::kFormatVersion;

  m.def("build", &build, py::arg("root"), py::arg("alpha") = 0.6, py::arg("k") = 0, py::arg("seed") = 0,
        py::arg("resolution") = 512, py::arg("prev") = py::none(), py::arg("built_at") = "",
        "Builds a map model from a source tree; returns the model JSON text.");
  m.def(
      "diff",
      [](const std::string& a, const std::string& b) {
        return model::to_json(model::diff(parse_model(a), parse_model(b))).dump();
      },
      py::arg("before"), py::arg("after"));
  m.def(
      "render_svg",
      [](const std::string& text, int size, double ci, double az, double alt) {
        return carto::render_svg(parse_model(text), {}, render_options(size, ci, az, alt));
      },
      py::arg("model"), py::arg("size") = 1024, py::arg("contour_interval") = 0.1, py::arg("light_azimuth") = 315.0,
      py::arg("light_altitude") = 45.0);
  m.def(
      "render_png",
      [](const std::string& text, int size, double ci, double az, double alt) {
        const auto png = carto::render_png(parse_model(text), {}, render_options(size, ci, az, alt));
        return py::bytes(reinterpret_cast<const char*>(png.data()), png.size());
      },
      py::arg("model"), py::arg("size") = 1024, py::arg("contour_interval") = 0.1, py::arg("light_azimuth") = 315.0,
      py::arg("light_altitude") = 45.0);

  py::class_<Map>(m, "Map")
      .def(py::init<const std::string&, const std::string&>(), py::arg("model"), py::arg("root"))
      .def("map", &Map::map)
      .def("search", &Map::search, py::arg("q") = py::none(), py::arg("mode") = py::none())
      .def("callers", &Map::callers, py::arg("symbol") = py::none())
      .def("file", &Map::file, py::arg("path") = py::none())
      .def("anchors", &Map::anchors, py::arg("body"));

  py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);
}
