// SPDX-License-Identifier: Apache-2.0
// Python bindings. Documents cross the boundary as JSON text; the package
// __init__ converts them to and from Python objects.
#include <weylab/check.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

weylab::Json parse(const std::string& text) {
  try {
    return weylab::Json::parse(text);
  } catch (const weylab::Json::exception& e) {
    throw weylab::UsageError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Einstein-Weyl spaces, monopoles and selfdual 4-metrics";
  m.attr("__version__") = weylab::kVersion;

  auto error = py::register_exception<weylab::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<weylab::UsageError>(m, "UsageError", error.ptr());
  py::register_exception<weylab::DomainError>(m, "DomainError", error.ptr());

  m.def(
      "run_check",
      [](const std::string& command, const std::string& request, unsigned workers) {
        weylab::Json report;
        {
          py::gil_scoped_release release;
          report = weylab::run_check(command, parse(request), workers);
        }
        return weylab::dump_json(report);
      },
      py::arg("command"), py::arg("request"), py::arg("workers") = 0);
  m.def(
      "build", [](const std::string& request) { return weylab::dump_json(weylab::build_request(parse(request))); },
      py::arg("request"));
  m.def("catalog", [] { return weylab::dump_json(weylab::catalog_json()); });
  m.def(
      "ew_residual",
      [](const std::string& space, const std::map<std::string, std::string>& params, std::vector<double> point) {
        const weylab::WeylStructure3 W = weylab::make_catalog_space(space, params);
        if (point.size() != 3) throw weylab::UsageError("point must have 3 coordinates");
        return weylab::ew_residual_at(W, point);
      },
      py::arg("space"), py::arg("params"), py::arg("point"));
}
