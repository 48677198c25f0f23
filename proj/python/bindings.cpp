#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracwill/config.hpp"
#include "fracwill/constants.hpp"
#include "fracwill/core_math.hpp"
#include "fracwill/errors.hpp"
#include "fracwill/fraclap1d.hpp"
#include "fracwill/geometry.hpp"
#include "fracwill/heat_kernel.hpp"
#include "fracwill/profile.hpp"
#include "fracwill/reports.hpp"

namespace py = pybind11;
using namespace fracwill;

PYBIND11_MODULE(_fracwill, m) {
    m.doc() = "Fractional Laplacian, optimal profile and nonlocal Willmore experiments";

    static py::exception<Error> base(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = base;
            PyErr_SetObject(exc.ptr(), py::make_tuple(error_kind_name(e.kind()), e.what()).ptr());
        }
    });

    m.def("gamma_fn", &gamma_fn, py::arg("x"));
    m.def("beta_fn", &beta_fn, py::arg("a"), py::arg("b"));
    m.def("gamma_ds", &gamma_ds, py::arg("d"), py::arg("s"));
    m.def("radial_moment", &radial_moment, py::arg("a"), py::arg("b"));
    m.def("sphere_area", &sphere_area, py::arg("n"));
    m.def("kernel_reduction_constant", &kernel_reduction_constant, py::arg("d"), py::arg("s"), py::arg("alpha"),
          py::arg("beta"));
    m.def("hyp2f1", &hyp2f1, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"));

    m.def("flap_spectral", &flap_spectral, py::arg("samples"), py::arg("period"), py::arg("s"));

    m.def("heat_kernel", &heat_kernel, py::arg("t"), py::arg("x"), py::arg("s"));
    m.def("heat_kernel_deriv", &heat_kernel_deriv, py::arg("k"), py::arg("x"), py::arg("s"));
    m.def("fundamental_solution", &fundamental_solution, py::arg("lam"), py::arg("x"), py::arg("s"));
    m.def("fundamental_solution_mass", &fundamental_solution_mass, py::arg("lam"), py::arg("s"));

    py::class_<DoubleWell>(m, "DoubleWell")
        .def_static("by_name", &DoubleWell::by_name)
        .def_readonly("name", &DoubleWell::name)
        .def_readonly("lam", &DoubleWell::lambda)
        .def("W", [](const DoubleWell& w, double u) { return w.W(u); })
        .def("dW", [](const DoubleWell& w, double u) { return w.dW(u); });

    py::class_<SampledProfile>(m, "Profile")
        .def_readonly("s", &SampledProfile::s)
        .def_readonly("residual_sup", &SampledProfile::residual_sup)
        .def_readonly("iterations", &SampledProfile::iterations)
        .def_property_readonly("L", &SampledProfile::L)
        .def_property_readonly("n", [](const SampledProfile& w) { return w.f.n(); })
        .def_property_readonly("tail_coefficient", &SampledProfile::tail_coefficient)
        .def_property_readonly("samples", [](const SampledProfile& w) { return w.f.samples(); })
        .def("value", &SampledProfile::value)
        .def("derivative", &SampledProfile::derivative);

    m.def(
        "solve_profile",
        [](const std::string& potential, double s, double L, int n, double tol, bool newton) {
            SolveOptions opt;
            opt.tol = tol;
            opt.newton_polish = newton;
            return solve_profile(DoubleWell::by_name(potential), s, L, n, opt);
        },
        py::arg("potential") = "quartic", py::arg("s") = 0.75, py::arg("L") = 40.0, py::arg("n") = 4096,
        py::arg("tol") = 1e-3, py::arg("newton") = false);
    m.def("profile_residual", &profile_residual, py::arg("w"), py::arg("W"), py::arg("a"), py::arg("b"));
    m.def("decay_fit", &decay_fit, py::arg("w"), py::arg("k"), py::arg("z_lo"), py::arg("z_hi"));
    m.def("save_profile", &save_profile, py::arg("path"), py::arg("w"));
    m.def("load_profile", &load_profile, py::arg("path"));

    m.def("kappa_star", &kappa_star, py::arg("s"), py::arg("mu") = 0.0);
    m.def(
        "mu_w",
        [](const SampledProfile& w, double s, std::vector<double> cutoffs) {
            MuLadder r = mu_w(w, s, cutoffs.empty() ? default_cutoff_ladder() : cutoffs);
            py::dict d;
            d["cutoffs"] = r.cutoffs;
            d["raw"] = r.raw;
            d["extrapolated"] = r.extrapolated;
            d["value"] = r.value;
            return d;
        },
        py::arg("w"), py::arg("s"), py::arg("cutoffs") = std::vector<double>{});

    m.def("signed_distance", [](const std::string& curve, double x, double y) {
        return signed_distance(PlanarCurve::parse(curve), Point{x, y});
    });
    m.def("perimeter_and_willmore", [](const std::string& curve) {
        return perimeter_and_willmore(PlanarCurve::parse(curve));
    });

    m.def("parse_config", [](const std::string& text) { return parse_config(text).describe(); });
    m.def(
        "run_report",
        [](const std::string& text) {
            RunOutcome out = run_report(parse_config(text));
            return py::make_tuple(out.csv, out.failed_rows);
        },
        py::arg("config_text"));
}
