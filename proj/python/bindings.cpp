#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ddsc/bundle.hpp"
#include "ddsc/reach.hpp"
#include "ddsc/safety.hpp"
#include "ddsc/serialize.hpp"
#include "ddsc/setops.hpp"
#include "ddsc/sim.hpp"
#include "ddsc/sysid.hpp"

namespace py = pybind11;
using namespace ddsc;

PYBIND11_MODULE(_core, mod)
{
    mod.doc() = "Data-driven safe control under false-data injection";

    py::register_exception<EmptySetError>(mod, "EmptySetError", PyExc_RuntimeError);
    py::register_exception<RankError>(mod, "RankError", PyExc_RuntimeError);

    py::class_<Zonotope>(mod, "Zonotope")
        .def(py::init<Vector, Matrix>(), py::arg("center"), py::arg("generators"))
        .def_static("point", &Zonotope::point)
        .def_static("box", &Zonotope::box, py::arg("lower"), py::arg("upper"))
        .def_property_readonly("center", &Zonotope::center)
        .def_property_readonly("generators", &Zonotope::generators)
        .def_property_readonly("dim", &Zonotope::dim)
        .def_property_readonly("order", &Zonotope::order)
        .def("radius", &Zonotope::radius)
        .def("support", &Zonotope::support)
        .def("contains", [](const Zonotope& z, const Vector& x) { return contains_point(z, x); });

    py::class_<HPolytope>(mod, "HPolytope")
        .def(py::init<Matrix, Vector>(), py::arg("H"), py::arg("h"))
        .def_static("box", &HPolytope::box, py::arg("lower"), py::arg("upper"))
        .def_property_readonly("H", &HPolytope::H)
        .def_property_readonly("h", &HPolytope::h)
        .def_property_readonly("dim", &HPolytope::dim)
        .def("contains", [](const HPolytope& p, const Vector& x) { return p.contains(x); })
        .def("bounding_box", &HPolytope::bounding_box);

    py::class_<MatrixZonotope>(mod, "MatrixZonotope")
        .def(py::init<Matrix, std::vector<Matrix>>(), py::arg("center"), py::arg("generators"))
        .def_property_readonly("center", &MatrixZonotope::center)
        .def_property_readonly("generators", &MatrixZonotope::generators)
        .def_property_readonly("order", &MatrixZonotope::order)
        .def("contains", [](const MatrixZonotope& M, const Matrix& AB) { return membership_check(M, AB); })
        .def("reduce", &MatrixZonotope::reduce);

    mod.def("collect", [](const std::string& scenario_json) {
        const ScenarioConfig cfg = parse_scenario(scenario_json);
        return dump_bank(collect_data(cfg.plant, cfg.data));
    }, py::arg("scenario_json"), "Open-loop data runs of the scenario plant, as trajectory bank JSON.");

    mod.def("identify", [](const std::string& bank_json) { return identify(parse_bank(bank_json)); },
            py::arg("bank_json"), "Matrix zonotope of all [A, B] consistent with the data.");

    mod.def("rors_point", &rors_point, py::arg("M"), py::arg("x"), py::arg("u"), py::arg("W"));

    mod.def("verify", [](const Vector& u, const Vector& x, const MatrixZonotope& M, const HPolytope& U,
                         const HPolytope& X_eta, const Zonotope& W) { return to_string(verify(u, x, M, U, X_eta, W)); },
            py::arg("u"), py::arg("x"), py::arg("M"), py::arg("U"), py::arg("X_eta"), py::arg("W"));

    mod.def("synthesize", [](const std::string& bank_json, const std::string& scenario_json) {
        const TrajectoryBank bank = parse_bank(bank_json);
        const ScenarioConfig cfg = parse_scenario(scenario_json);
        py::gil_scoped_release release;
        return dump_bundle(synthesize(bank, cfg));
    }, py::arg("bank_json"), py::arg("scenario_json"), "Offline synthesis; returns the bundle JSON.");

    mod.def("simulate", [](const std::string& bundle_json, const std::string& scenario_json, std::uint64_t seed,
                           bool baseline, bool attacks) {
        const SynthesisBundle b = parse_bundle(bundle_json);
        const ScenarioConfig cfg = parse_scenario(scenario_json);
        py::gil_scoped_release release;
        return trace_to_csv(run_scenario(cfg, b, seed, RunOptions{!baseline, attacks}));
    }, py::arg("bundle_json"), py::arg("scenario_json"), py::arg("seed") = 1, py::arg("baseline") = false,
       py::arg("attacks") = true, "Closed-loop run; returns the trace CSV text.");

    mod.def("metric_er", [](const std::string& csv) { return metric_er(parse_trace_csv(csv)); }, py::arg("trace_csv"),
            "Mean distance between state and reference over k >= 1.");
}
