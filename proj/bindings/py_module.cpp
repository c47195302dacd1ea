// py_module.cpp - pybind11 surface over the core library: atom parameters,
// contribution types, closed-form references, elastic/inelastic/strong-drive
// spectra, per-path totals, the single-atom spectrum oracle, and the full
// assembly used by the command-line front end.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cbs3/diagram.hpp"
#include "cbs3/io.hpp"
#include "cbs3/oracle.hpp"
#include "cbs3/spectra.hpp"

namespace py = pybind11;
using namespace cbs3;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Triple-scattering ladder and crossed contributions to coherent "
              "backscattering from driven two-level atoms";
    m.attr("__version__") = kVersion;

    py::class_<AtomParams>(m, "AtomParams",
                           "Driven two-level atom: Rabi frequency (may be complex), "
                           "detuning, and half linewidth gamma, all in common units")
        .def(py::init([](cd rabi, double detuning, double gamma) {
                 AtomParams p{rabi, detuning, gamma};
                 p.validate();
                 return p;
             }),
             py::arg("rabi") = cd(1.0, 0.0), py::arg("detuning") = 0.0, py::arg("gamma") = 1.0)
        .def_readwrite("rabi", &AtomParams::rabi)
        .def_readwrite("detuning", &AtomParams::detuning)
        .def_readwrite("gamma", &AtomParams::gamma)
        .def("validate", &AtomParams::validate)
        .def("__repr__", [](const AtomParams& p) {
            std::ostringstream os;
            os << "AtomParams(rabi=(" << p.rabi.real() << "+" << p.rabi.imag()
               << "j), detuning=" << p.detuning << ", gamma=" << p.gamma << ")";
            return os.str();
        });

    py::class_<QuadratureConfig>(m, "QuadratureConfig",
                                 "Adaptive-integration settings shared by every evaluator")
        .def(py::init([](double rel_tol, double abs_floor, int max_intervals) {
                 QuadratureConfig q;
                 q.rel_tol = rel_tol;
                 q.abs_floor = abs_floor;
                 q.max_intervals = max_intervals;
                 return q;
             }),
             py::arg("rel_tol") = 1e-8, py::arg("abs_floor") = 0.0,
             py::arg("max_intervals") = 2000)
        .def_readwrite("rel_tol", &QuadratureConfig::rel_tol)
        .def_readwrite("abs_floor", &QuadratureConfig::abs_floor)
        .def_readwrite("max_intervals", &QuadratureConfig::max_intervals)
        .def("__repr__", [](const QuadratureConfig& q) {
            std::ostringstream os;
            os << "QuadratureConfig(rel_tol=" << q.rel_tol << ", abs_floor=" << q.abs_floor
               << ", max_intervals=" << q.max_intervals << ")";
            return os.str();
        });

    py::enum_<ContributionType>(m, "ContributionType",
                                "The four triple-scattering contribution types: two ladder "
                                "(co-propagating) and two crossed (counter-propagating)")
        .value("L1", ContributionType::L1)
        .value("L2", ContributionType::L2)
        .value("C1", ContributionType::C1)
        .value("C2", ContributionType::C2);

    py::enum_<RefKind>(m, "RefKind",
                       "Small-drive closed-form reference selector (elastic intensities, "
                       "inelastic spectral densities, integrated inelastic totals)")
        .value("ElasticL1", RefKind::ElasticL1)
        .value("ElasticL2", RefKind::ElasticL2)
        .value("ElasticC1", RefKind::ElasticC1)
        .value("ElasticC2", RefKind::ElasticC2)
        .value("InelasticL1", RefKind::InelasticL1)
        .value("InelasticL2", RefKind::InelasticL2)
        .value("InelasticC1", RefKind::InelasticC1)
        .value("InelasticC2", RefKind::InelasticC2)
        .value("IntegratedLadder", RefKind::IntegratedLadder)
        .value("IntegratedCrossed", RefKind::IntegratedCrossed);

    py::class_<SpectrumResult>(m, "SpectrumResult",
                               "Full assembly on a detected-detuning grid; degeneracy "
                               "factors applied, elastic parts listed separately")
        .def_readonly("nu_grid", &SpectrumResult::nuGrid)
        .def_readonly("ladder1", &SpectrumResult::ladder1)
        .def_readonly("ladder2", &SpectrumResult::ladder2)
        .def_readonly("crossed1", &SpectrumResult::crossed1)
        .def_readonly("crossed2", &SpectrumResult::crossed2)
        .def_readonly("elastic", &SpectrumResult::elastic)
        .def_readonly("params", &SpectrumResult::params)
        .def_readonly("quad", &SpectrumResult::quad)
        .def_readonly("term_counts", &SpectrumResult::term_counts)
        .def_readonly("imag_residual", &SpectrumResult::imag_residual);

    m.def("enhancement_factor", &enhancement_factor, py::arg("detuning"),
          "Small-drive backscattering enhancement 1 + C/L from the integrated "
          "closed forms (detuning in units of gamma)");

    m.def(
        "perturbative_reference",
        [](double delta, double omega, RefKind which) {
            return perturbative_reference(delta, omega, which);
        },
        py::arg("detuning"), py::arg("rabi"), py::arg("kind"),
        "Scalar small-drive closed form (elastic intensity or integrated inelastic total)");
    m.def(
        "perturbative_reference",
        [](double delta, double omega, RefKind which, double nu) {
            return perturbative_reference(delta, omega, which, nu);
        },
        py::arg("detuning"), py::arg("rabi"), py::arg("kind"), py::arg("nu"),
        "Small-drive closed-form spectral density at detected detuning nu");

    m.def("degeneracy_factor", &degeneracy_factor, py::arg("type"),
          "Geometric path multiplicity applied to each contribution type");
    m.def(
        "term_count",
        [](ContributionType type) { return static_cast<int>(enumerate_type(type).size()); },
        py::arg("type"), "Number of allowed wired terms of one contribution type");

    m.def("elastic_intensity", &elastic_intensity, py::arg("params"), py::arg("type"),
          py::arg("quad") = QuadratureConfig{},
          "Elastic (drive-frequency) intensity of one contribution type, degeneracy applied",
          py::call_guard<py::gil_scoped_release>());
    m.def("inelastic_spectrum", &inelastic_spectrum, py::arg("params"), py::arg("type"),
          py::arg("nu_grid"), py::arg("quad") = QuadratureConfig{},
          "Inelastic spectral density of one contribution type on a detected-detuning grid",
          py::call_guard<py::gil_scoped_release>());
    m.def("strong_drive_spectrum", &strong_drive_spectrum, py::arg("params"), py::arg("type"),
          py::arg("nu_grid"), py::arg("quad") = QuadratureConfig{},
          "All-box subset of the inelastic spectrum that dominates for strong driving",
          py::call_guard<py::gil_scoped_release>());
    m.def("per_path_total", &per_path_total, py::arg("params"), py::arg("type"),
          py::arg("quad") = QuadratureConfig{},
          "Total per-path intensity (elastic plus integrated inelastic) of one type, "
          "before degeneracy or real-part folding",
          py::call_guard<py::gil_scoped_release>());

    m.def("default_nu_grid", &default_nu_grid, py::arg("params"), py::arg("points") = 801,
          "Detected-detuning grid covering the strong-drive sideband window");
    m.def("compute_spectrum", &compute_spectrum, py::arg("params"), py::arg("nu_grid"),
          py::arg("quad") = QuadratureConfig{},
          "Assemble all four contributions on a grid (the command-line spectrum mode)",
          py::call_guard<py::gil_scoped_release>());

    m.def("single_atom_spectrum_oracle", &single_atom_spectrum_oracle, py::arg("params"),
          py::arg("nu_grid"),
          "Independent single-atom inelastic spectrum from the regression identity",
          py::call_guard<py::gil_scoped_release>());
}
