#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jointradius/index.hpp"
#include "jointradius/jointcalc.hpp"
#include "jointradius/range.hpp"
#include "jointradius/serialize.hpp"
#include "jointradius/verify.hpp"

namespace py = pybind11;
using namespace jointradius;

namespace {

// nlohmann::json -> Python objects by way of the json module.
py::object to_python(const json& doc) { return py::module_::import("json").attr("loads")(doc.dump()); }

json from_python(const py::object& obj) {
    return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

Mode parse_mode(const std::string& mode) {
    if (mode == "exact") return Mode::Exact;
    if (mode == "optimize") return Mode::Optimize;
    if (mode == "auto") return Mode::Auto;
    throw py::value_error("mode must be 'exact', 'optimize' or 'auto'");
}

OptimizeOptions optimize_options(int starts, std::uint64_t seed) {
    OptimizeOptions o;
    o.starts = starts;
    o.seed = seed;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Joint operator norms, joint numerical radii and joint numerical indices";

    static py::exception<Error> error_type(m, "JointRadiusError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error_type, e.what());
        }
    });

    py::enum_<Field>(m, "Field").value("Real", Field::Real).value("Complex", Field::Complex);

    py::class_<Space>(m, "Space")
        .def_static("lq", &Space::lq, py::arg("q"), py::arg("dim"), py::arg("field") = Field::Real)
        .def_static("direct_sum", &Space::direct_sum, py::arg("summands"), py::arg("outer_q"))
        .def_static("c0_sum", &Space::c0_sum, py::arg("summands"))
        .def_static("from_json", [](const py::object& doc) { return space_from_json(from_python(doc)); })
        .def("to_json", [](const Space& s) { return to_python(space_to_json(s)); })
        .def_property_readonly("q", &Space::q)
        .def_property_readonly("dim", &Space::dim)
        .def_property_readonly("field", &Space::field)
        .def_property_readonly("summands", &Space::summands)
        .def("is_polyhedral", &Space::is_polyhedral)
        .def("describe", &Space::describe)
        .def("__eq__", [](const Space& a, const Space& b) { return a == b; })
        .def("__repr__", [](const Space& s) { return "Space(" + s.describe() + ")"; });

    m.def("dual_space", &dual_space);
    m.def("norm", py::overload_cast<const Space&, const Vector&>(&norm), py::arg("space"), py::arg("x"));
    m.def("extreme_points", [](const Space& s) { return extreme_points(s); });
    m.def("norming_functionals",
          [](const Space& s, const Vector& x) { return norming_functionals(s, x).generators; });

    py::class_<OperatorTuple>(m, "OperatorTuple")
        .def(py::init<std::vector<Matrix>, const Space&>(), py::arg("mats"), py::arg("space"))
        .def(py::init<std::vector<Matrix>, Space, Space>(), py::arg("mats"), py::arg("source"),
             py::arg("target"))
        .def_static("from_json", [](const py::object& doc) { return tuple_from_json(from_python(doc)); })
        .def("to_json", [](const OperatorTuple& t) { return to_python(tuple_to_json(t)); })
        .def_property_readonly("k", &OperatorTuple::k)
        .def_property_readonly("mats", &OperatorTuple::mats)
        .def_property_readonly("source", &OperatorTuple::source)
        .def_property_readonly("target", &OperatorTuple::target)
        .def("scaled", &OperatorTuple::scaled)
        .def("adjoint", [](const OperatorTuple& t) { return adjoint(t); });

    m.def("random_tuple", &random_tuple, py::arg("space"), py::arg("k"), py::arg("seed"),
          py::arg("stream") = 0);
    m.def("lift_direct_sum", &lift_direct_sum, py::arg("tuple"), py::arg("host"), py::arg("slot"));
    m.def("pad", &pad, py::arg("tuple"), py::arg("k"));

    m.def(
        "joint_operator_norm",
        [](const OperatorTuple& t, double p, const std::string& mode, int starts, std::uint64_t seed) {
            return to_python(result_to_json(joint_operator_norm(t, p, parse_mode(mode), optimize_options(starts, seed)),
                                            t.source().field()));
        },
        py::arg("tuple"), py::arg("p"), py::arg("mode") = "auto", py::arg("starts") = 64, py::arg("seed") = 0);
    m.def(
        "joint_numerical_radius",
        [](const OperatorTuple& t, double p, const std::string& mode, int starts, std::uint64_t seed) {
            return to_python(result_to_json(
                joint_numerical_radius(t, p, parse_mode(mode), optimize_options(starts, seed)), t.source().field()));
        },
        py::arg("tuple"), py::arg("p"), py::arg("mode") = "auto", py::arg("starts") = 64, py::arg("seed") = 0);

    m.def(
        "sample_range",
        [](const OperatorTuple& t, std::size_t count, std::uint64_t seed) {
            return flatten_points(sample_range(t, count, seed));
        },
        py::arg("tuple"), py::arg("count") = 10000, py::arg("seed") = 0,
        "Sampled joint numerical range as real rows (complex points become re..., im...).");
    m.def(
        "convexity_report",
        [](const OperatorTuple& t, std::size_t count, std::size_t trials, double tol, std::uint64_t seed) {
            return to_python(convexity_to_json(convexity_report(sample_range(t, count, seed), trials, tol, seed)));
        },
        py::arg("tuple"), py::arg("count") = 10000, py::arg("trials") = 2000, py::arg("tol") = 0.05,
        py::arg("seed") = 0);

    m.def("classical_index", &classical_index);
    m.def(
        "closed_form_index",
        [](const Space& s, double p, int k) -> std::optional<double> {
            const auto cf = closed_form_index(s, p, k);
            return cf ? std::optional<double>(cf->value) : std::nullopt;
        },
        py::arg("space"), py::arg("p"), py::arg("k"));
    m.def("index_bounds", [](const Space& s, double p, int k) {
        const auto b = index_bounds(s, p, k);
        return py::make_tuple(b.lower, b.upper);
    });
    m.def("witness_tuple", &witness_tuple, py::arg("space"), py::arg("p"), py::arg("k"));
    m.def(
        "estimate_index",
        [](const Space& s, double p, int k, std::size_t budget, std::uint64_t seed, int starts) {
            IndexOptions o;
            o.budget = budget;
            o.seed = seed;
            o.random_starts = starts;
            o.inner.seed = seed;
            return to_python(estimate_to_json(estimate_index(s, p, k, o)));
        },
        py::arg("space"), py::arg("p"), py::arg("k"), py::arg("budget") = 100000, py::arg("seed") = 0,
        py::arg("starts") = 4);

    m.def(
        "verify",
        [](const std::string& suite, std::uint64_t seed, std::size_t trials) {
            py::list out;
            for (const auto& line : run_suite(suite, seed, trials))
                out.append(py::make_tuple(line.ok, line.description));
            return out;
        },
        py::arg("suite") = "all", py::arg("seed") = 0, py::arg("trials") = 20);

    m.attr("inf") = kInf;
}
