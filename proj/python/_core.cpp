#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zrs/io.hpp"
#include "zrs/krein.hpp"
#include "zrs/resolvent.hpp"
#include "zrs/scatterers.hpp"
#include "zrs/scattering.hpp"
#include "zrs/spherical.hpp"

namespace py = pybind11;
using namespace zrs;

namespace {

ComplexEnergy energy(dcomplex z) { return ComplexEnergy::at(z); }

py::object report_dict(const AdmissibilityReport& r) {
    return py::module_::import("json").attr("loads")(to_json(r).dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Point scatterers: Krein resolvent, scattering matrix and diagnostics.";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DuplicatePoint>(m, "DuplicatePoint", error);
    py::register_exception<BadParams>(m, "BadParams", error);
    py::register_exception<ZeroDistance>(m, "ZeroDistance", error);
    py::register_exception<NonPositiveGram>(m, "NonPositiveGram", error);
    py::register_exception<BadOrder>(m, "BadOrder", error);
    py::register_exception<GridMismatch>(m, "GridMismatch", error);
    py::register_exception<FitUnstable>(m, "FitUnstable", error);
    py::register_exception<TailNotContractive>(m, "TailNotContractive", error);
    auto singular = py::register_exception<SingularMatrix>(m, "SingularMatrix", error);
    py::register_exception<SingularSchurComplement>(m, "SingularSchurComplement", singular);

    py::class_<ScattererSet>(m, "ScattererSet")
        .def(py::init([](std::vector<Vec3> points, std::vector<double> weights, double eps) {
                 return ScattererSet::create(std::move(points), std::move(weights), eps);
             }),
             py::arg("points"), py::arg("weights"), py::arg("eps") = default_duplicate_epsilon)
        .def_static(
            "from_json", [](const std::string& src) { return load_scatterers(src); },
            py::arg("source"), "Inline JSON object or path to a JSON file.")
        .def("__len__", &ScattererSet::size)
        .def_property_readonly("points", &ScattererSet::points)
        .def_property_readonly("weights", &ScattererSet::weights)
        .def("prefix", &ScattererSet::prefix)
        .def("with_weights", &ScattererSet::with_weights)
        .def("diameter", &ScattererSet::diameter)
        .def("max_radius", &ScattererSet::max_radius);

    m.def(
        "admissibility",
        [](const ScattererSet& s, double b, std::optional<std::size_t> n0) {
            AdmissibilityOptions opt;
            opt.b = b;
            opt.n0 = n0;
            return report_dict(check_admissibility(s, opt));
        },
        py::arg("scatterers"), py::arg("b") = 1.0, py::arg("n0") = py::none());

    m.def(
        "free_green", [](dcomplex z, double r) { return free_green(energy(z), r); },
        py::arg("z"), py::arg("r"));
    m.def(
        "q_matrix", [](dcomplex z, const ScattererSet& s) { return build_Q(energy(z), s); },
        py::arg("z"), py::arg("scatterers"));
    m.def(
        "q_matrix_boundary",
        [](double lambda, const ScattererSet& s) {
            return build_Q(ComplexEnergy::boundary(lambda), s);
        },
        py::arg("lambda_"), py::arg("scatterers"));
    m.def("gamma", &gamma_at, py::arg("scatterers"), py::arg("lambda_"));
    m.def(
        "gamma_schur",
        [](const ScattererSet& s, double lambda, std::size_t split, double b) {
            return gamma_schur(s, lambda, split, b).gamma;
        },
        py::arg("scatterers"), py::arg("lambda_"), py::arg("split"), py::arg("b"));
    m.def(
        "krein_c", [](dcomplex z, const ScattererSet& s) { return krein_C(energy(z), s); },
        py::arg("z"), py::arg("scatterers"));
    m.def(
        "gram_matrix", [](double lambda, const ScattererSet& s) { return gram_matrix(lambda, s).G; },
        py::arg("lambda_"), py::arg("scatterers"));
    m.def(
        "q_norm_bound", [](const ScattererSet& s, dcomplex z) { return q_norm_bound(s, energy(z)); },
        py::arg("scatterers"), py::arg("z"));

    py::class_<SphereGrid, std::shared_ptr<SphereGrid>>(m, "SphereGrid")
        .def(py::init([](const std::string& kind, std::size_t order) {
                 return std::make_shared<SphereGrid>(make_grid(parse_grid_kind(kind), order));
             }),
             py::arg("kind") = "gauss-legendre-product", py::arg("order") = 16)
        .def("__len__", &SphereGrid::size)
        .def_readonly("order", &SphereGrid::order)
        .def_readonly("nodes", &SphereGrid::nodes)
        .def_readonly("weights", &SphereGrid::weights)
        .def_readonly("theta", &SphereGrid::theta)
        .def_readonly("phi", &SphereGrid::phi)
        .def_property_readonly("exact_degree", &SphereGrid::exact_degree);

    py::class_<SMatrixRep>(m, "SMatrix")
        .def_readonly("lambda_", &SMatrixRep::lambda)
        .def_readonly("gamma", &SMatrixRep::gamma)
        .def_readonly("coeff", &SMatrixRep::coeff)
        .def_readonly("overlap", &SMatrixRep::overlap)
        .def("kernel", &smatrix_kernel, py::arg("n"), py::arg("n_prime"))
        .def(
            "apply",
            [](const SMatrixRep& rep, std::shared_ptr<SphereGrid> grid, CVector values) {
                return apply_smatrix(rep, make_function(grid, std::move(values))).values;
            },
            py::arg("grid"), py::arg("values"))
        .def("unitarity_defect_reduced",
             py::overload_cast<const SMatrixRep&>(&unitarity_defect_reduced))
        .def("unitarity_defect_operator", &unitarity_defect_operator)
        .def("deviation", &smatrix_deviation)
        .def(
            "unitarity_defect_quadrature",
            [](const SMatrixRep& rep, std::shared_ptr<SphereGrid> grid, std::size_t trials,
               std::uint64_t seed) { return unitarity_defect_quadrature(rep, grid, trials, seed); },
            py::arg("grid"), py::arg("trials") = 8, py::arg("seed") = 0);

    m.def("smatrix", &smatrix, py::arg("lambda_"), py::arg("scatterers"));
    m.def("smatrix_schur", &smatrix_schur, py::arg("lambda_"), py::arg("scatterers"),
          py::arg("n0"), py::arg("b"));
    m.def("omega_unitary", &omega_unitary, py::arg("upsilon"), py::arg("lambda_matrix"));

    m.def(
        "continuity_scan",
        [](const ScattererSet& s, double a, double b, std::size_t intervals) {
            const ContinuityScan c = gamma_continuity_scan(s, a, b, intervals);
            return py::make_tuple(c.lambdas, c.increments, c.max_increment);
        },
        py::arg("scatterers"), py::arg("a"), py::arg("b"), py::arg("intervals"));

    py::class_<ResolventKernel>(m, "ResolventKernel")
        .def_readonly("C", &ResolventKernel::C)
        .def("__call__", &ResolventKernel::value, py::arg("x"), py::arg("x_prime"))
        .def("free", &ResolventKernel::free, py::arg("x"), py::arg("x_prime"));
    m.def("resolvent_kernel", &resolvent_kernel, py::arg("z"), py::arg("scatterers"));
    m.def("hilbert_identity_residual",
          py::overload_cast<dcomplex, dcomplex, const ScattererSet&>(&hilbert_identity_residual),
          py::arg("z1"), py::arg("z2"), py::arg("scatterers"));
    m.def("symmetry_residual", &symmetry_residual, py::arg("z"), py::arg("scatterers"));
    m.def("boundary_condition_residual", &boundary_condition_residual, py::arg("z"),
          py::arg("scatterers"), py::arg("source"), py::arg("radii") = std::vector<double>{});
}
