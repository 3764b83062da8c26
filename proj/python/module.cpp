#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "boutroux/descent.hpp"
#include "boutroux/errors.hpp"
#include "boutroux/io.hpp"
#include "boutroux/trajectories.hpp"

namespace py = pybind11;
using namespace boutroux;

namespace {

ProblemSpec make_spec(std::vector<cplx> points, std::vector<cplx> phi, double t0, int L) {
    ProblemSpec s;
    s.e_points = std::move(points);
    s.phi = std::move(phi);
    s.t0 = t0;
    s.L = L;
    s.validate();
    return s;
}

}  // namespace

PYBIND11_MODULE(_boutroux, m) {
    m.doc() = "Boutroux quadratic differentials: descent, periods and critical trajectories";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<SingularSylvester>(m, "SingularSylvester", base.ptr());
    py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
    py::register_exception<MultiplicityAmbiguity>(m, "MultiplicityAmbiguity", base.ptr());

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init(&make_spec), py::arg("points"), py::arg("phi") = std::vector<cplx>{}, py::arg("t0") = 1.0,
             py::arg("L") = 0)
        .def_readonly("points", &ProblemSpec::e_points)
        .def_readonly("phi", &ProblemSpec::phi)
        .def_readonly("t0", &ProblemSpec::t0)
        .def_readonly("L", &ProblemSpec::L)
        .def_property_readonly("N", &ProblemSpec::N)
        .def_property_readonly("R", &ProblemSpec::R)
        .def_property_readonly("M", &ProblemSpec::M)
        .def_property_readonly("genus", &ProblemSpec::genus);

    py::class_<DifferentialState>(m, "State")
        .def_static(
            "from_roots",
            [](const ProblemSpec& spec, const std::vector<cplx>& s_roots, const std::vector<cplx>& delta_roots) {
                return DifferentialState::from_roots(spec, s_roots, delta_roots);
            },
            py::arg("spec"), py::arg("s_roots"), py::arg("delta_roots"))
        .def_readonly("spec", &DifferentialState::spec)
        .def_readonly("s_roots", &DifferentialState::s_roots)
        .def_readonly("delta_roots", &DifferentialState::delta_roots)
        .def_property_readonly("L", &DifferentialState::L)
        .def_property_readonly("M", &DifferentialState::M)
        .def_property_readonly("genus", &DifferentialState::genus)
        .def_property_readonly("S", [](const DifferentialState& s) { return s.S.coeffs(); })
        .def_property_readonly("delta", [](const DifferentialState& s) { return s.delta.coeffs(); })
        .def_property_readonly("cuts",
                               [](const DifferentialState& s) {
                                   std::vector<std::pair<cplx, cplx>> out;
                                   for (const Cut& c : s.cuts().cuts) out.emplace_back(c.a, c.b);
                                   return out;
                               })
        .def("Q", &DifferentialState::Q)
        .def("sqrt_q", &DifferentialState::sqrt_q);

    m.def("random_state", &random_state, py::arg("spec"), py::arg("seed") = 1);

    py::class_<PeriodData>(m, "PeriodData").def_readonly("T", &PeriodData::T).def_readonly("P", &PeriodData::P);
    m.def("compute_periods", [](const DifferentialState& s) { return compute_periods(s); });
    m.def("functional", [](const DifferentialState& s) { return functional(s); });

    py::class_<DescentReport>(m, "Report")
        .def_readonly("iterations", &DescentReport::iterations)
        .def_readonly("merges", &DescentReport::merges)
        .def_readonly("F_history", &DescentReport::F_history)
        .def_readonly("state", &DescentReport::final_state)
        .def_readonly("periods", &DescentReport::final_periods)
        .def_readonly("reason", &DescentReport::reason)
        .def_property_readonly("status", [](const DescentReport& r) { return to_string(r.status); })
        .def_property_readonly("F", [](const DescentReport& r) { return r.F_history.back(); });

    m.def(
        "solve",
        [](const ProblemSpec& spec, std::uint64_t seed, double tol, int max_iter, double dt0) {
            DescentOptions o;
            o.f_exit = tol;
            o.max_iter = max_iter;
            o.dt0 = dt0;
            py::gil_scoped_release release;
            return run(spec, seed, o);
        },
        py::arg("spec"), py::arg("seed") = 1, py::arg("tol") = 1e-10, py::arg("max_iter") = 20000,
        py::arg("dt0") = 0.1);

    py::class_<CriticalPoint>(m, "CriticalPoint")
        .def_readonly("location", &CriticalPoint::location)
        .def_readonly("multiplicity", &CriticalPoint::multiplicity)
        .def_readonly("directions", &CriticalPoint::directions)
        .def_property_readonly("kind", [](const CriticalPoint& p) { return to_string(p.kind); });
    m.def("critical_points", &critical_points);

    py::class_<GraphEdge>(m, "Edge")
        .def_readonly("start", &GraphEdge::from)
        .def_readonly("end", &GraphEdge::to)
        .def_readonly("path", &GraphEdge::path)
        .def_readonly("error", &GraphEdge::error)
        .def_property_readonly("bounded", &GraphEdge::bounded)
        .def_property_readonly("termination", [](const GraphEdge& e) { return to_string(e.termination); });
    py::class_<TrajectoryGraph>(m, "Graph")
        .def_readonly("nodes", &TrajectoryGraph::nodes)
        .def_readonly("edges", &TrajectoryGraph::edges)
        .def_readonly("launched", &TrajectoryGraph::launched)
        .def_property_readonly("connected", &TrajectoryGraph::connected)
        .def_property_readonly("components", &TrajectoryGraph::component_count);
    m.def("build_graph", [](const DifferentialState& s) {
        py::gil_scoped_release release;
        return build_graph(s);
    });
    m.def("render_svg", &render_svg, py::arg("graph"), py::arg("state"));

    m.def("roots", [](const std::vector<cplx>& coeffs) { return roots(ComplexPoly(coeffs)); },
          py::arg("coeffs"), "Roots of the polynomial with ascending coefficients.");
    m.def("select_cuts", [](const std::vector<cplx>& pts) {
        std::vector<std::pair<cplx, cplx>> out;
        for (const Cut& c : select_cuts(pts).cuts) out.emplace_back(c.a, c.b);
        return out;
    });
    m.def("parse_points", &parse_points);
    m.def("parse_phi", &parse_phi);
}
