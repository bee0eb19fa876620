#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <variant>

#include "hopath/hopath.hpp"

namespace py = pybind11;
using namespace hopath;

namespace {

KernelSource source_of(std::optional<std::size_t> steps) {
    if (steps) return LatticeKernel{*steps};
    return ClosedKernel{};
}

}  // namespace

PYBIND11_MODULE(_hopath, m) {
    m.doc() = "Discrete-time path integral for the harmonic oscillator.";

    auto& error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
    py::register_exception<CausticProximity>(m, "CausticProximity", error.ptr());
    py::register_exception<StepsTooSmall>(m, "StepsTooSmall", error.ptr());
    py::register_exception<NumericalFailure>(m, "NumericalFailure", error.ptr());

    m.attr("CAUSTIC_TOLERANCE") = kCausticTolerance;

    py::class_<OscillatorConfig>(m, "OscillatorConfig")
        .def(py::init([](double mass, double omega, double hbar, double time, double x_initial, double x_final) {
                 OscillatorConfig c{mass, omega, hbar, time, x_initial, x_final};
                 c.validate();
                 return c;
             }),
             py::kw_only(), py::arg("mass") = 1.0, py::arg("omega") = 1.0, py::arg("hbar") = 1.0,
             py::arg("time") = 1.0, py::arg("x_initial") = 0.0, py::arg("x_final") = 0.0)
        .def_readwrite("mass", &OscillatorConfig::mass)
        .def_readwrite("omega", &OscillatorConfig::omega)
        .def_readwrite("hbar", &OscillatorConfig::hbar)
        .def_readwrite("time", &OscillatorConfig::time)
        .def_readwrite("x_initial", &OscillatorConfig::x_initial)
        .def_readwrite("x_final", &OscillatorConfig::x_final)
        .def("omega_time", &OscillatorConfig::omega_time)
        .def("with_time", &OscillatorConfig::with_time)
        .def("with_endpoints", &OscillatorConfig::with_endpoints)
        .def("__repr__", [](const OscillatorConfig& c) {
            return py::str("OscillatorConfig(mass={}, omega={}, hbar={}, time={}, x_initial={}, x_final={})")
                .format(c.mass, c.omega, c.hbar, c.time, c.x_initial, c.x_final);
        });

    py::class_<GaussianPacket>(m, "GaussianPacket")
        .def(py::init<double, double, double>(), py::arg("center"), py::arg("width"), py::arg("momentum") = 0.0)
        .def_property_readonly("center", &GaussianPacket::center)
        .def_property_readonly("width", &GaussianPacket::width)
        .def_property_readonly("momentum", &GaussianPacket::momentum)
        .def("peak", &GaussianPacket::peak)
        .def("__call__", py::overload_cast<std::complex<double>>(&GaussianPacket::operator(), py::const_));

    py::class_<TimeClass>(m, "TimeClass")
        .def_readonly("m_index", &TimeClass::m_index)
        .def_readonly("maslov_l", &TimeClass::maslov_l)
        .def_readonly("at_caustic", &TimeClass::at_caustic);

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("eigenvalues", &Spectrum::eigenvalues)
        .def_readonly("zero_crossing", &Spectrum::zero_crossing)
        .def_readonly("negative_count", &Spectrum::negative_count)
        .def_readonly("m_index", &Spectrum::m_index)
        .def_readonly("maslov_l", &Spectrum::maslov_l)
        .def_readonly("at_caustic", &Spectrum::at_caustic)
        .def_readonly("counts_consistent", &Spectrum::counts_consistent);

    py::class_<RegularKernel>(m, "RegularKernel")
        .def_readonly("amplitude", &RegularKernel::amplitude)
        .def_readonly("magnitude", &RegularKernel::magnitude)
        .def_readonly("phase", &RegularKernel::phase)
        .def_readonly("maslov_phase", &RegularKernel::maslov_phase)
        .def_readonly("maslov_index", &RegularKernel::maslov_index);

    py::class_<CausticDelta>(m, "CausticDelta")
        .def_readonly("m_index", &CausticDelta::m_index)
        .def_readonly("maslov_phase", &CausticDelta::maslov_phase)
        .def_readonly("parity", &CausticDelta::parity);

    py::class_<CausticState>(m, "CausticState")
        .def_readonly("m_index", &CausticState::m_index)
        .def_readonly("steps", &CausticState::steps)
        .def_readonly("epsilon", &CausticState::epsilon)
        .def_readonly("z", &CausticState::z);

    py::class_<ConvergenceRow>(m, "ConvergenceRow")
        .def_readonly("steps", &ConvergenceRow::steps)
        .def_readonly("abs_error", &ConvergenceRow::abs_error)
        .def_readonly("rel_error", &ConvergenceRow::rel_error)
        .def_readonly("local_order", &ConvergenceRow::local_order);
    py::class_<ConvergenceStudy>(m, "ConvergenceStudy")
        .def_readonly("rows", &ConvergenceStudy::rows)
        .def_readonly("fitted_slope", &ConvergenceStudy::fitted_slope);

    py::class_<DeltaLimitRow>(m, "DeltaLimitRow")
        .def_readonly("steps", &DeltaLimitRow::steps)
        .def_readonly("value", &DeltaLimitRow::value)
        .def_readonly("deviation", &DeltaLimitRow::deviation);
    py::class_<DeltaLimitStudy>(m, "DeltaLimitStudy")
        .def_readonly("rows", &DeltaLimitStudy::rows)
        .def_readonly("reference", &DeltaLimitStudy::reference)
        .def_readonly("converged_steps", &DeltaLimitStudy::converged_steps);

    py::class_<FresnelResult>(m, "FresnelResult")
        .def_readonly("value", &FresnelResult::value)
        .def_readonly("regularized", &FresnelResult::regularized)
        .def_readonly("extrapolation_residual", &FresnelResult::extrapolation_residual);

    py::class_<ExpansionResult>(m, "ExpansionResult")
        .def_readonly("value", &ExpansionResult::value)
        .def_readonly("tail_estimate", &ExpansionResult::tail_estimate)
        .def_readonly("n_max", &ExpansionResult::n_max);

    py::class_<CausticPhaseCheck>(m, "CausticPhaseCheck")
        .def_readonly("m_index", &CausticPhaseCheck::m_index)
        .def_readonly("expected_phase", &CausticPhaseCheck::expected_phase)
        .def_readonly("measured_phase", &CausticPhaseCheck::measured_phase)
        .def_readonly("parity", &CausticPhaseCheck::parity)
        .def_readonly("l2_deviation", &CausticPhaseCheck::l2_deviation);

    m.def("classify_time", &classify_time, py::arg("config"), py::arg("caustic_tol") = kCausticTolerance);
    m.def(
        "sigma", [](const OscillatorConfig& c, std::size_t n) { return sigma(c, n).value; }, py::arg("config"),
        py::arg("n"));
    m.def(
        "eigenvalues",
        [](const OscillatorConfig& c, std::size_t steps) { return eigenvalues_closed_form(c, Discretization(c, steps)); },
        py::arg("config"), py::arg("steps"));
    m.def(
        "analyze", [](const OscillatorConfig& c, std::size_t steps) { return analyze(c, Discretization(c, steps)); },
        py::arg("config"), py::arg("steps"));
    m.def(
        "zero_crossing",
        [](const OscillatorConfig& c, std::size_t steps) { return zero_crossing(c, Discretization(c, steps)); },
        py::arg("config"), py::arg("steps"));
    m.def("minimal_stable_steps", &minimal_stable_steps, py::arg("config"),
          py::arg("caustic_tol") = kCausticTolerance);
    m.def(
        "log_determinant",
        [](const OscillatorConfig& c, std::size_t steps) {
            const SignedLog d = determinant_closed_form(c, Discretization(c, steps));
            return py::make_tuple(d.sign, d.log_abs);
        },
        py::arg("config"), py::arg("steps"), "(sign, log|D_{N-1}|)");
    m.def(
        "classical_action",
        [](const OscillatorConfig& c, std::size_t steps) { return classical_action(c, Discretization(c, steps)); },
        py::arg("config"), py::arg("steps"));

    m.def(
        "discrete_kernel",
        [](const OscillatorConfig& c, std::size_t steps) -> KernelValue {
            return discrete_kernel(c, Discretization(c, steps));
        },
        py::arg("config"), py::arg("steps"));
    m.def(
        "closed_form_kernel", [](const OscillatorConfig& c) { return closed_form_kernel(c); }, py::arg("config"));
    m.def(
        "routed_caustic", [](const OscillatorConfig& c) { return routed_caustic(c); }, py::arg("config"));
    m.def(
        "convergence_study",
        [](const OscillatorConfig& c, const std::vector<std::size_t>& ladder) {
            py::gil_scoped_release release;
            return convergence_study(c, ladder);
        },
        py::arg("config"), py::arg("ladder"));

    m.def(
        "caustic_state", [](const OscillatorConfig& c, std::size_t steps) { return caustic_state(c, steps); },
        py::arg("config"), py::arg("steps"));
    m.def("rewrite_kernel_uv", &rewrite_kernel_uv, py::arg("config"), py::arg("steps"), py::arg("x_initial"),
          py::arg("x_final"));
    m.def(
        "smeared_kernel",
        [](const OscillatorConfig& c, const GaussianPacket& f, double x_final, std::optional<std::size_t> steps) {
            py::gil_scoped_release release;
            return smeared_kernel(c, f, x_final, source_of(steps));
        },
        py::arg("config"), py::arg("packet"), py::arg("x_final"), py::arg("steps") = py::none(),
        "Closed-form kernel when steps is None, otherwise the N-step lattice kernel.");
    m.def(
        "delta_limit_reference",
        [](const OscillatorConfig& c, const GaussianPacket& f, double x_final) {
            return delta_limit_reference(c, f, x_final);
        },
        py::arg("config"), py::arg("packet"), py::arg("x_final"));
    m.def(
        "delta_limit_study",
        [](const OscillatorConfig& c, const GaussianPacket& f, double x_final, double tol) {
            py::gil_scoped_release release;
            return delta_limit_study(c, f, x_final, tol);
        },
        py::arg("config"), py::arg("packet"), py::arg("x_final"), py::arg("tol") = 1e-3);

    m.def(
        "brute_force_fresnel",
        [](const OscillatorConfig& c, std::size_t steps) {
            py::gil_scoped_release release;
            return brute_force_fresnel(c, Discretization(c, steps));
        },
        py::arg("config"), py::arg("steps"));
    m.def(
        "eigenfunction_expansion",
        [](const OscillatorConfig& c, std::size_t n_max, const GaussianPacket& f, double x_final, double tail_tol) {
            py::gil_scoped_release release;
            return eigenfunction_expansion_kernel(c, n_max, f, x_final, tail_tol);
        },
        py::arg("config"), py::arg("n_max"), py::arg("packet"), py::arg("x_final"), py::arg("tail_tol") = 1e-6);
    m.def(
        "measure_caustic_phase",
        [](const OscillatorConfig& c, const GaussianPacket& f, int m_index, std::size_t steps) {
            py::gil_scoped_release release;
            return measure_caustic_phase(c, f, m_index, steps);
        },
        py::arg("config"), py::arg("packet"), py::arg("m_index"), py::arg("steps"));
}
