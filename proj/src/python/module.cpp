// Python bindings: scenario execution plus a thin slice of the fiber layer
// for interactive exploration and smoke tests.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "holocycle/bundled_scenarios.hpp"
#include "holocycle/circle_diffeo.hpp"
#include "holocycle/errors.hpp"
#include "holocycle/pipelines.hpp"

namespace py = pybind11;

namespace {

using holocycle::CircleDiffeo;
using holocycle::ConfigInvalid;
using holocycle::Json;
using holocycle::ScenarioConfig;

py::object json_to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Json py_to_json(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) return Json::parse(py::cast<std::string>(obj));
  auto text = py::cast<std::string>(py::module_::import("json").attr("dumps")(obj));
  return Json::parse(text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Circle-map cocycles over hyperbolic base dynamics";

  py::register_exception<ConfigInvalid>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "run_scenario",
      [](const py::object& config, int max_workers) {
        ScenarioConfig cfg = ScenarioConfig::from_json(py_to_json(config));
        auto run = holocycle::run_scenario(cfg, max_workers);
        return json_to_py(holocycle::make_report({run}, max_workers));
      },
      py::arg("config"), py::arg("max_workers") = 1,
      "Run one scenario given as a dict or JSON text; returns the report dict.");

  m.def(
      "list_scenarios",
      []() {
        py::list out;
        for (const auto& sc : holocycle::bundled_scenarios()) {
          py::dict d;
          d["name"] = sc.name;
          d["title"] = sc.title;
          d["pipeline"] = sc.pipeline;
          d["expect"] = sc.expect;
          out.append(d);
        }
        return out;
      },
      "Names, titles, and pipelines of the bundled scenarios.");

  m.def(
      "bundled_config",
      [](const std::string& name) {
        const ScenarioConfig* sc = holocycle::find_bundled_scenario(name);
        if (!sc) throw ConfigInvalid("no bundled scenario named '" + name + "'");
        return json_to_py(sc->to_json());
      },
      py::arg("name"), "Full config dict of a bundled scenario.");

  py::class_<CircleDiffeo>(m, "CircleMap", "Orientation-preserving circle diffeomorphism on a grid")
      .def_static("identity", &CircleDiffeo::identity, py::arg("grid_size") = 512,
                  py::arg("jet_order") = 1)
      .def_static("rotation", &CircleDiffeo::rotation, py::arg("angle"),
                  py::arg("grid_size") = 512, py::arg("jet_order") = 1)
      .def_static(
          "from_lift",
          [](const std::function<double(double)>& lift, int grid, int order) {
            return CircleDiffeo::from_lift(lift, grid, order);
          },
          py::arg("lift"), py::arg("grid_size") = 512, py::arg("jet_order") = 1,
          "Sample a degree-one lift t -> h(t) on the grid.")
      .def_property_readonly("grid_size", &CircleDiffeo::grid_size)
      .def_property_readonly("jet_order", &CircleDiffeo::jet_order)
      .def("lift", &CircleDiffeo::lift, py::arg("t"))
      .def("__call__", &CircleDiffeo::circle_image, py::arg("x"))
      .def("derivative", &CircleDiffeo::derivative, py::arg("k"), py::arg("t"))
      .def("inverse", &CircleDiffeo::inverse)
      .def("compose", [](const CircleDiffeo& g, const CircleDiffeo& h) { return compose(g, h); },
           py::arg("inner"), "self after inner, i.e. self(inner(t)).")
      .def("distance",
           [](const CircleDiffeo& g, const CircleDiffeo& h) { return holocycle::d0(g, h); },
           py::arg("other"), "Uniform circle distance to another map.");

  m.def("circle_distance", &holocycle::circle_dist, py::arg("a"), py::arg("b"),
        "Distance on the circle R/Z.");
}
