#include "flquad/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace flquad {

namespace {

struct ControllerOutput {
    VirtualCommand v;
    CommandBar u;
    double cond_E{0.0};
};

// One controller evaluation: reference, flat state, tracking law,
// linearizing feedback. Throws DomainError outside D.
ControllerOutput control(const Scenario& sc, const ExtendedState& x, double t)
{
    ControllerOutput out;
    if (sc.virtual_override) {
        out.v = sc.virtual_override(t);
    } else {
        const ReferencePoint ref = reference(sc.ref, t);
        out.v = tracking_command(flat_state(x, sc.params), ref, sc.gains);
    }
    out.u = fl_feedback(x, out.v, sc.params, sc.margins, &out.cond_E);
    return out;
}

StateVec closed_loop_rhs(const Scenario& sc, const StateVec& xv, double t)
{
    const ExtendedState x = ExtendedState::from_vector(xv);
    const ControllerOutput c = control(sc, x, t);
    const DisturbanceSample w = disturbance_eval(sc.disturbance, t);
    return rhs(x, c.u, w, sc.params);
}

TelemetryRow make_row(const Scenario& sc, const ExtendedState& x, double t)
{
    TelemetryRow row;
    row.t = t;
    row.x = x;
    row.z = flat_state(x, sc.params);
    row.ref = reference(sc.ref, t);
    const ControllerOutput c = control(sc, x, t);
    row.v = c.v;
    row.u = c.u;
    row.cond_E = c.cond_E;
    row.in_domain = in_domain(x, sc.margins);
    const DisturbanceSample w = disturbance_eval(sc.disturbance, t);
    const OutputDerivatives od = snap_factored(x, c.u, w, sc.params);
    row.snap_residual = od.snap - c.v.v_r;
    row.psi_ddot_residual = od.psi_ddot - c.v.v_psi;
    return row;
}

}  // namespace

void Scenario::validate() const
{
    if (!(step > 0.0)) {
        throw std::invalid_argument("scenario: step must be positive");
    }
    if (duration < step) {
        throw std::invalid_argument("scenario: duration must be >= step");
    }
    params.validate();
    flquad::validate(ref);
    if (!in_domain(initial_state(), margins)) {
        throw DomainError("scenario: initial state outside domain D");
    }
}

ExtendedState Scenario::initial_state() const
{
    switch (initial.kind) {
        case InitialSpec::Kind::FromReference:
            return flat_to_state(reference(ref, 0.0).flat(), params);
        case InitialSpec::Kind::Hover:
            return hover_trim(params, initial.r0, initial.psi0).first;
        case InitialSpec::Kind::State:
            return initial.state;
    }
    return initial.state;
}

SimResult simulate(const Scenario& scenario)
{
    scenario.validate();

    const auto n = static_cast<size_t>(std::llround(scenario.duration / scenario.step));
    SimResult result;
    result.telemetry.step = scenario.step;
    result.telemetry.rows.reserve(n + 1);

    StateVec xv = scenario.initial_state().to_vector();
    const auto f = [&scenario](const StateVec& s, double t) {
        return closed_loop_rhs(scenario, s, t);
    };

    double t = 0.0;
    try {
        for (size_t i = 0; i <= n; ++i) {
            t = static_cast<double>(i) * scenario.step;
            const ExtendedState x = ExtendedState::from_vector(xv);
            const TelemetryRow row = make_row(scenario, x, t);
            if (!row.in_domain) {
                result.status = SimStatus::DomainExit;
                result.message = "state left domain D at t = " + std::to_string(t);
                break;
            }
            if (x.zeta < scenario.params.zeta_min
                || std::abs(row.u.u1_ddot) > scenario.params.u1_ddot_max
                || row.u.torque().template lpNorm<Eigen::Infinity>() > scenario.params.torque_max) {
                ++result.saturation_warnings;
            }
            result.telemetry.rows.push_back(row);
            if (i == n) {
                break;
            }
            xv = rk4_step(xv, t, scenario.step, f);
            if (!xv.allFinite()) {
                result.status = SimStatus::NonFinite;
                result.message = "non-finite state after step at t = " + std::to_string(t);
                break;
            }
        }
    } catch (const DomainError& e) {
        result.status = SimStatus::DomainExit;
        result.message = std::string(e.what()) + " (t = " + std::to_string(t) + ")";
    } catch (const SingularityError& e) {
        result.status = SimStatus::DomainExit;
        result.message = std::string(e.what()) + " (t = " + std::to_string(t) + ")";
    }

    result.t_end = result.telemetry.rows.empty() ? 0.0 : result.telemetry.rows.back().t;
    return result;
}

LinearizationReport linearization_exactness_check(const Scenario& scenario)
{
    scenario.validate();
    if (!scenario.disturbance.is_zero()) {
        throw std::invalid_argument(
            "linearization_exactness_check: requires a zero-disturbance scenario");
    }

    using AugVec = Eigen::Matrix<double, 28, 1>;
    const ExtendedState x0 = scenario.initial_state();
    AugVec y;
    y.head<14>() = x0.to_vector();
    y.tail<14>() = flat_state(x0, scenario.params).to_vector();

    // Both subsystems advance in one RK4 step, so every stage of the
    // chain sees exactly the virtual command produced by the nonlinear
    // loop at that stage.
    const auto f = [&scenario](const AugVec& s, double t) {
        const ExtendedState x = ExtendedState::from_vector(s.head<14>());
        const ControllerOutput c = control(scenario, x, t);
        AugVec dy;
        dy.head<14>() = rhs(x, c.u, DisturbanceSample{}, scenario.params);
        const FlatState zc = FlatState::from_vector(s.tail<14>());
        StateVec dz;
        dz.segment<3>(0) = zc.v;
        dz.segment<3>(3) = zc.a;
        dz.segment<3>(6) = zc.s;
        dz.segment<3>(9) = c.v.v_r;
        dz(12) = zc.eta;
        dz(13) = c.v.v_psi;
        dy.tail<14>() = dz;
        return dy;
    };

    const auto n = static_cast<size_t>(std::llround(scenario.duration / scenario.step));
    LinearizationReport rep;
    std::array<double, 4> sq_sum{};
    for (size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * scenario.step;
        const FlatState z_nl = flat_state(
            ExtendedState::from_vector(y.head<14>()), scenario.params);
        const FlatState z_ch = FlatState::from_vector(y.tail<14>());
        const std::array<double, 4> dev{
            std::abs(z_ch.r.x() - z_nl.r.x()),
            std::abs(z_ch.r.y() - z_nl.r.y()),
            std::abs(z_ch.r.z() - z_nl.r.z()),
            std::abs(z_ch.psi - z_nl.psi)};
        for (size_t c = 0; c < 4; ++c) {
            rep.max_dev[c] = std::max(rep.max_dev[c], dev[c]);
            sq_sum[c] += dev[c] * dev[c];
        }
        if (i < n) {
            y = rk4_step(y, t, scenario.step, f);
        }
    }
    for (size_t c = 0; c < 4; ++c) {
        rep.rms_dev[c] = std::sqrt(sq_sum[c] / static_cast<double>(n + 1));
        rep.max_dev_overall = std::max(rep.max_dev_overall, rep.max_dev[c]);
    }
    return rep;
}

FdReport fd_derivative_check(const Telemetry& telemetry, int order, int channel)
{
    if (channel < 0 || channel > 3) {
        throw std::invalid_argument("fd_derivative_check: channel must be 0..3");
    }
    const int max_order = (channel == 3) ? 2 : 4;
    if (order < 1 || order > max_order) {
        throw std::invalid_argument("fd_derivative_check: unsupported derivative order");
    }
    const int margin = (order <= 2) ? 1 : 2;
    const auto n = static_cast<long>(telemetry.rows.size());
    if (n < 2 * margin + 1) {
        throw std::invalid_argument("fd_derivative_check: insufficient samples");
    }

    const auto& rows = telemetry.rows;
    const double h = telemetry.step;
    const auto output = [&](long i) {
        return channel == 3 ? rows[static_cast<size_t>(i)].z.psi
                            : rows[static_cast<size_t>(i)].z.r(channel);
    };
    const auto analytic = [&](long i) {
        const auto& r = rows[static_cast<size_t>(i)];
        if (channel == 3) {
            return order == 1 ? r.z.eta : r.v.v_psi + r.psi_ddot_residual;
        }
        switch (order) {
            case 1: return r.z.v(channel);
            case 2: return r.z.a(channel);
            case 3: return r.z.s(channel);
            default: return r.v.v_r(channel) + r.snap_residual(channel);
        }
    };

    FdReport rep;
    double sq_sum = 0.0;
    for (long i = margin; i < n - margin; ++i) {
        double fd = 0.0;
        switch (order) {
            case 1:
                fd = (output(i + 1) - output(i - 1)) / (2.0 * h);
                break;
            case 2:
                fd = (output(i + 1) - 2.0 * output(i) + output(i - 1)) / (h * h);
                break;
            case 3:
                fd = (output(i + 2) - 2.0 * output(i + 1) + 2.0 * output(i - 1)
                      - output(i - 2)) / (2.0 * h * h * h);
                break;
            default:
                fd = (output(i + 2) - 4.0 * output(i + 1) + 6.0 * output(i)
                      - 4.0 * output(i - 1) + output(i - 2)) / (h * h * h * h);
                break;
        }
        const double res = std::abs(fd - analytic(i));
        rep.max_residual = std::max(rep.max_residual, res);
        sq_sum += res * res;
        ++rep.samples;
    }
    rep.rms_residual = rep.samples > 0
        ? std::sqrt(sq_sum / static_cast<double>(rep.samples)) : 0.0;
    return rep;
}

}  // namespace flquad
