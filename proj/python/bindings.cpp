#include "flquad/scenario_io.hpp"
#include "flquad/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace flquad;

namespace {

py::dict sim_result_to_dict(const SimResult& result)
{
    py::dict out;
    out["status"] = result.status == SimStatus::Completed ? "completed"
                  : result.status == SimStatus::DomainExit ? "domain-exit"
                                                           : "non-finite";
    out["message"] = result.message;
    out["t_end"] = result.t_end;
    out["saturation_warnings"] = result.saturation_warnings;
    out["columns"] = telemetry_columns();
    out["telemetry"] = telemetry_matrix(result.telemetry);
    return out;
}

}  // namespace

PYBIND11_MODULE(_flquad, m)
{
    m.doc() = "feedback-linearized quadrotor model, simulator and verifier";

    py::register_exception<SingularityError>(m, "SingularityError");
    py::register_exception<DomainError>(m, "DomainError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<EulerAngles>(m, "EulerAngles")
        .def(py::init<>())
        .def(py::init([](double phi, double theta, double psi) {
                 return EulerAngles{phi, theta, psi};
             }),
             py::arg("phi"), py::arg("theta"), py::arg("psi"))
        .def_readwrite("phi", &EulerAngles::phi)
        .def_readwrite("theta", &EulerAngles::theta)
        .def_readwrite("psi", &EulerAngles::psi);

    py::class_<ExtendedState>(m, "ExtendedState")
        .def(py::init<>())
        .def_readwrite("r", &ExtendedState::r)
        .def_readwrite("v", &ExtendedState::v)
        .def_readwrite("theta", &ExtendedState::theta)
        .def_readwrite("omega_b", &ExtendedState::omega_b)
        .def_readwrite("zeta", &ExtendedState::zeta)
        .def_readwrite("chi", &ExtendedState::chi)
        .def("to_vector", &ExtendedState::to_vector)
        .def_static("from_vector", &ExtendedState::from_vector);

    py::class_<CommandBar>(m, "CommandBar")
        .def(py::init<>())
        .def(py::init([](double u1_ddot, double u2, double u3, double u4) {
                 return CommandBar{u1_ddot, u2, u3, u4};
             }),
             py::arg("u1_ddot"), py::arg("u2"), py::arg("u3"), py::arg("u4"))
        .def_readwrite("u1_ddot", &CommandBar::u1_ddot)
        .def_readwrite("u2", &CommandBar::u2)
        .def_readwrite("u3", &CommandBar::u3)
        .def_readwrite("u4", &CommandBar::u4)
        .def("to_vector", &CommandBar::to_vector);

    py::class_<DisturbanceSample>(m, "DisturbanceSample")
        .def(py::init<>())
        .def_readwrite("d", &DisturbanceSample::d)
        .def_readwrite("a_d", &DisturbanceSample::a_d)
        .def_readwrite("a_d_dot", &DisturbanceSample::a_d_dot)
        .def_readwrite("a_d_ddot", &DisturbanceSample::a_d_ddot);

    py::class_<VehicleParams>(m, "VehicleParams")
        .def(py::init<>())
        .def_readwrite("J", &VehicleParams::J)
        .def_readwrite("g_mag", &VehicleParams::g_mag)
        .def_readwrite("zeta_min", &VehicleParams::zeta_min)
        .def("validate", &VehicleParams::validate);

    py::class_<FlatState>(m, "FlatState")
        .def(py::init<>())
        .def_readwrite("r", &FlatState::r)
        .def_readwrite("v", &FlatState::v)
        .def_readwrite("a", &FlatState::a)
        .def_readwrite("s", &FlatState::s)
        .def_readwrite("psi", &FlatState::psi)
        .def_readwrite("eta", &FlatState::eta)
        .def("to_vector", &FlatState::to_vector);

    py::class_<VirtualCommand>(m, "VirtualCommand")
        .def(py::init<>())
        .def_readwrite("v_r", &VirtualCommand::v_r)
        .def_readwrite("v_psi", &VirtualCommand::v_psi);

    py::class_<DecouplingMatrixE>(m, "DecouplingMatrixE")
        .def_readonly("E", &DecouplingMatrixE::E)
        .def_readonly("det", &DecouplingMatrixE::det);

    py::class_<DomainMargins>(m, "DomainMargins")
        .def(py::init<>())
        .def_readwrite("tilt_margin", &DomainMargins::tilt_margin)
        .def_readwrite("zeta_min", &DomainMargins::zeta_min);

    // math_core
    m.def("skew", &skew, py::arg("w"));
    m.def("att_kinematics", &att_kinematics, py::arg("theta"));
    m.def("rot_body_to_inertial", &rot_body_to_inertial, py::arg("theta"));
    m.def("gyroscopic", &gyroscopic, py::arg("w"), py::arg("J"));
    m.def("wrap_pi", &wrap_pi, py::arg("angle"));

    // extended_model
    m.def("rhs", &rhs, py::arg("x"), py::arg("u"), py::arg("w"), py::arg("p"));
    m.def("hover_trim", &hover_trim, py::arg("p"), py::arg("r0"), py::arg("psi0"));

    // fl_transform
    m.def("b_psi", &b_psi, py::arg("theta"));
    m.def("b_psi_dot", &b_psi_dot, py::arg("theta"), py::arg("omega_b"));
    m.def("h_psi", &h_psi, py::arg("x"), py::arg("p"));
    m.def("jerk", &jerk, py::arg("x"), py::arg("a_d_dot"));
    m.def("snap_raw", &snap_raw, py::arg("x"), py::arg("u"), py::arg("w"), py::arg("p"));
    m.def("h_r", &h_r, py::arg("x"), py::arg("p"));
    m.def("d_r", &d_r, py::arg("x"), py::arg("w"));
    m.def("d_psi", &d_psi, py::arg("theta"), py::arg("d"));
    m.def("decoupling_matrix", &decoupling_matrix, py::arg("theta"), py::arg("zeta"));
    m.def("condition_number", &condition_number, py::arg("E"));
    m.def("in_domain", &in_domain, py::arg("x"), py::arg("margins"));
    m.def("flat_state", &flat_state, py::arg("x"), py::arg("p"));
    m.def("flat_to_state", &flat_to_state, py::arg("z"), py::arg("p"));
    m.def("snap_factored",
          [](const ExtendedState& x, const CommandBar& u,
             const DisturbanceSample& w, const VehicleParams& p) {
              const OutputDerivatives od = snap_factored(x, u, w, p);
              return py::make_tuple(od.snap, od.psi_ddot);
          },
          py::arg("x"), py::arg("u"), py::arg("w"), py::arg("p"));
    m.def("fl_feedback",
          [](const ExtendedState& x, const VirtualCommand& v,
             const VehicleParams& p, const DomainMargins& margins) {
              return fl_feedback(x, v, p, margins);
          },
          py::arg("x"), py::arg("v"), py::arg("p"),
          py::arg("margins") = DomainMargins{});
    m.def("position_command_transform", &position_command_transform,
          py::arg("x"), py::arg("u"));
    m.def("h_psi_star", &h_psi_star, py::arg("theta"), py::arg("u2"), py::arg("u3"));

    // linear_control
    m.def("chain_gains", &chain_gains, py::arg("order"), py::arg("lambda_"));

    // simulator, driven by the same JSON schema as the CLI
    m.def("simulate_json",
          [](const std::string& json_text) {
              return sim_result_to_dict(simulate(scenario_from_json(json_text)));
          },
          py::arg("scenario_json"),
          "Run a scenario given as a JSON string; returns a dict with the "
          "telemetry matrix and column names.");

    m.def("verify",
          [](int samples, unsigned long seed) {
              VerifyOptions opt;
              opt.samples = samples;
              opt.seed = seed;
              py::list out;
              for (const auto& r : run_verification(opt)) {
                  py::dict d;
                  d["id"] = r.id;
                  d["label"] = r.label;
                  d["passed"] = r.passed;
                  d["skipped"] = r.skipped;
                  d["metric"] = r.metric;
                  d["tolerance"] = r.tolerance;
                  d["detail"] = r.detail;
                  out.append(d);
              }
              return out;
          },
          py::arg("samples") = 10000, py::arg("seed") = 12345,
          "Run the full verification ledger.");
}
