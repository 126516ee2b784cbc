#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ysurf/classify.hpp"
#include "ysurf/cli.hpp"
#include "ysurf/generators.hpp"
#include "ysurf/mesh_io.hpp"
#include "ysurf/spectra.hpp"

namespace py = pybind11;
using namespace ysurf;

namespace {

py::dict spectrum_dict(const SpectrumResult& r) {
  py::dict d;
  d["index"] = r.morse_index;
  d["nullity_truncated"] = r.nullity;
  d["eigenvalues"] = r.eigenvalues;
  d["zero_tolerance"] = r.zero_tolerance;
  d["dimension"] = r.dimension;
  d["method"] = r.method;
  return d;
}

Topology topology_of(const std::array<int, 3>& t) { return {t[0], t[1], t[2]}; }

}  // namespace

PYBIND11_MODULE(_ysurf, m) {
  m.doc() = "Morse index and theta invariants of minimal Y-surfaces";

  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<SpectralError>(m, "SpectralError", PyExc_RuntimeError);

  py::class_<YSurface>(m, "YSurface")
      .def_readonly("name", &YSurface::name)
      .def_property_readonly("num_faces", &YSurface::num_faces)
      .def_property_readonly("num_junctions", [](const YSurface& s) { return s.junctions.size(); })
      .def_property_readonly("total_nodes", &YSurface::total_nodes)
      .def("to_json", [](const YSurface& s) { return dump_document(surface_to_json(s)); })
      .def_static("from_json", [](const std::string& text) { return surface_from_json(nlohmann::json::parse(text)); })
      .def("__repr__", [](const YSurface& s) {
        std::ostringstream os;
        os << "<YSurface " << s.name << ": " << s.num_faces() << " faces, " << s.junctions.size() << " junctions>";
        return os.str();
      });

  m.def("catenoid", [](double a, double half_height, double h) { return make_catenoid(a, half_height, {h, 0}); },
        py::arg("a") = 1.0, py::arg("half_height") = 3.0, py::arg("h") = 0.05);
  m.def("ycatenoid", [](double r0, double trunc_u, double h) { return make_ycatenoid(r0, trunc_u, {h, 0}); },
        py::arg("r0") = 1.0, py::arg("trunc_u") = 3.0, py::arg("h") = 0.05);
  m.def("flat_ycone", [](double extent, double length, double h) { return make_flat_ycone(extent, length, {h, 0}); },
        py::arg("extent") = 1.0, py::arg("junction_length") = 1.0, py::arg("h") = 0.05);
  m.def("plane", [](double extent, double h) { return make_plane(extent, {h, 0}); }, py::arg("extent") = 1.0,
        py::arg("h") = 0.05);

  m.def(
      "spectrum",
      [](const YSurface& s, int modes, double tol) {
        SpectrumOptions o;
        o.modes = modes;
        o.zero_tolerance = tol;
        py::gil_scoped_release release;
        auto r = compute_spectrum(s, o);
        py::gil_scoped_acquire acquire;
        return spectrum_dict(r);
      },
      py::arg("surface"), py::arg("modes") = 5, py::arg("zero_tolerance") = 0.0);

  m.def("theta", [](const YSurface& s) {
    py::list out;
    for (const auto& f : theta_report(s).faces) {
      py::dict d;
      d["face"] = f.face;
      d["alpha"] = f.alpha;
      d["beta"] = f.beta;
      d["theta"] = f.theta;
      d["total_curvature"] = f.total_curvature;
      out.append(d);
    }
    return out;
  });

  m.def(
      "classify",
      [](const std::array<double, 3>& theta, const std::array<std::array<int, 3>, 3>& topology) {
        const auto v = classify_index_one(theta_report_from_values(
            theta, {topology_of(topology[0]), topology_of(topology[1]), topology_of(topology[2])}));
        py::dict d;
        d["conclusion"] = to_string(v.conclusion);
        d["path"] = v.path();
        d["deciding_rule"] = v.deciding_rule;
        d["boundary_flags"] = v.boundary_flags;
        return d;
      },
      py::arg("theta"), py::arg("topology"));

  m.def("constant_form", [](double t1, double t2, double t3) {
    const auto f = reduced_constant_form(t1, t2, t3);
    py::dict d;
    d["trace"] = f.trace;
    d["determinant"] = f.determinant;
    d["eigenvalues"] = f.eigenvalues;
    d["negative_count"] = f.negative_count;
    return d;
  });

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "ysurf");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
