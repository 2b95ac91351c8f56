#pragma once

#include "flquad/disturbance.hpp"
#include "flquad/linear_control.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace flquad {

// Classical fixed-step RK4 update. rhs is f(state, t) -> derivative.
template <typename State, typename Rhs>
State rk4_step(const State& x, double t, double h, Rhs&& rhs)
{
    const State k1 = rhs(x, t);
    const State k2 = rhs(State(x + 0.5 * h * k1), t + 0.5 * h);
    const State k3 = rhs(State(x + 0.5 * h * k2), t + 0.5 * h);
    const State k4 = rhs(State(x + h * k3), t + h);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct InitialSpec {
    enum class Kind { FromReference, Hover, State };
    Kind kind{Kind::FromReference};
    Vec3 r0{Vec3::Zero()};   // Hover
    double psi0{0.0};        // Hover
    ExtendedState state{};   // State
};

struct Scenario {
    double duration{10.0};  // s
    double step{1e-3};      // s
    VehicleParams params{};
    ReferenceSpec ref{HoverRef{}};
    DisturbanceSpec disturbance{};
    GainSet gains{GainSet::make(2.0, 3.0)};
    DomainMargins margins{};
    InitialSpec initial{};

    // Test hook: when set, replaces the tracking controller with an
    // externally prescribed virtual command (not serializable).
    std::function<VirtualCommand(double)> virtual_override;

    // Throws std::invalid_argument / DomainError on bad settings.
    void validate() const;

    ExtendedState initial_state() const;
};

struct TelemetryRow {
    double t{0.0};
    ExtendedState x{};
    FlatState z{};
    CommandBar u{};
    VirtualCommand v{};
    ReferencePoint ref{};
    bool in_domain{true};
    double cond_E{0.0};
    // Analytic output residuals: snap_factored minus commanded v.
    // Zero without disturbances; equals [d_r; d_psi] with them.
    Vec3 snap_residual{Vec3::Zero()};
    double psi_ddot_residual{0.0};
};

struct Telemetry {
    double step{0.0};
    std::vector<TelemetryRow> rows;
};

enum class SimStatus { Completed, DomainExit, NonFinite };

struct SimResult {
    SimStatus status{SimStatus::Completed};
    std::string message;
    double t_end{0.0};
    int saturation_warnings{0};
    Telemetry telemetry;
};

// Fixed-step closed-loop integration of the nonlinear plant under the
// linearizing feedback plus the tracking controller. Domain exits and
// non-finite states abort with a diagnostic; telemetry stays finite.
SimResult simulate(const Scenario& scenario);

// Lockstep co-simulation of the nonlinear closed loop and the pure
// integrator chains, both RK4 at the same step, the chains driven by
// the identical per-stage virtual command. Zero disturbance required.
struct LinearizationReport {
    std::array<double, 4> max_dev{};  // x, y, z, psi output channels
    std::array<double, 4> rms_dev{};
    double max_dev_overall{0.0};
};
LinearizationReport linearization_exactness_check(const Scenario& scenario);

// Central finite differences of recorded outputs against the recorded
// analytic chain values: order 1..4 on channels 0..2 (position axes)
// and order 1..2 on channel 3 (heading).
struct FdReport {
    double max_residual{0.0};
    double rms_residual{0.0};
    int samples{0};
};
FdReport fd_derivative_check(const Telemetry& telemetry, int order, int channel);

}  // namespace flquad
