#pragma once

#include "flquad/math_core.hpp"

#include <utility>

namespace flquad {

using StateVec = Eigen::Matrix<double, 14, 1>;

// 14-state extended plant state: position, velocity, attitude, body
// rates, plus the thrust integrator pair (zeta = mass-normalized
// thrust, chi = its rate) introduced by the dynamic extension.
struct ExtendedState {
    Vec3 r{Vec3::Zero()};         // m
    Vec3 v{Vec3::Zero()};         // m/s
    EulerAngles theta{};          // rad
    Vec3 omega_b{Vec3::Zero()};   // rad/s
    double zeta{0.0};             // m/s^2
    double chi{0.0};              // m/s^3

    StateVec to_vector() const;
    static ExtendedState from_vector(const StateVec& x);
};

// Extended command: second derivative of the thrust channel plus the
// three body-axis angular acceleration commands.
struct CommandBar {
    double u1_ddot{0.0};  // m/s^4
    double u2{0.0};       // rad/s^2
    double u3{0.0};       // rad/s^2
    double u4{0.0};       // rad/s^2

    Vec4 to_vector() const { return {u1_ddot, u2, u3, u4}; }
    Vec3 torque() const { return {u2, u3, u4}; }
    static CommandBar from_vector(const Vec4& u) { return {u(0), u(1), u(2), u(3)}; }
};

// One sample of the external disturbance channels together with the
// translational-channel derivatives needed by the jerk/snap chain.
struct DisturbanceSample {
    Vec3 d{Vec3::Zero()};         // rad/s^2, rotational
    Vec3 a_d{Vec3::Zero()};       // m/s^2, translational
    Vec3 a_d_dot{Vec3::Zero()};   // m/s^3
    Vec3 a_d_ddot{Vec3::Zero()};  // m/s^4
};

struct VehicleParams {
    Mat3 J{Mat3::Identity() * 0.02};  // kg m^2
    double g_mag{9.81};               // m/s^2
    double zeta_min{1.0};             // m/s^2, minimum saturation thrust
    double u1_ddot_max{200.0};        // m/s^4, |u1_ddot| bound (log-only)
    double torque_max{50.0};          // rad/s^2, |u2..u4| bound (log-only)

    Vec3 gravity() const { return {0.0, 0.0, g_mag}; }

    // Throws std::invalid_argument if J is not symmetric positive
    // definite or the scalar parameters are out of range.
    void validate() const;
};

// Right-hand side of the extended plant. Layout matches ExtendedState.
// Throws SingularityError when the attitude kinematics degenerate.
StateVec rhs(const ExtendedState& x, const CommandBar& u,
             const DisturbanceSample& w, const VehicleParams& p);

// Hover equilibrium at position r0 with heading psi0: level attitude,
// zero rates, thrust balancing gravity. rhs() at the returned pair is
// identically zero.
std::pair<ExtendedState, CommandBar> hover_trim(const VehicleParams& p,
                                                const Vec3& r0, double psi0);

}  // namespace flquad
