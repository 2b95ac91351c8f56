#pragma once

#include "flquad/extended_model.hpp"

namespace flquad {

// Transformed state z = [r v a s psi eta]: the output chains of the
// linearized model. 14 scalars, same count as the extended state.
struct FlatState {
    Vec3 r{Vec3::Zero()};    // m
    Vec3 v{Vec3::Zero()};    // m/s
    Vec3 a{Vec3::Zero()};    // m/s^2
    Vec3 s{Vec3::Zero()};    // m/s^3
    double psi{0.0};         // rad
    double eta{0.0};         // rad/s

    StateVec to_vector() const;
    static FlatState from_vector(const StateVec& z);
};

// New equivalent command after linearization: snap command for the
// position chains, acceleration command for the heading chain.
struct VirtualCommand {
    Vec3 v_r{Vec3::Zero()};  // m/s^4
    double v_psi{0.0};       // rad/s^2

    Vec4 to_vector() const { return {v_r.x(), v_r.y(), v_r.z(), v_psi}; }
};

// 4x4 decoupling matrix with its determinant cached. Block structure:
// upper-left B_r = R [0 0 zeta; 0 -zeta 0; 1 0 0], upper-right zero,
// last row [0, -t_theta c_psi, t_theta s_psi, 1]. det E = zeta^2.
struct DecouplingMatrixE {
    Mat4 E{Mat4::Zero()};
    double det{0.0};

    Eigen::Block<const Mat4, 3, 3> B_r() const { return E.topLeftCorner<3, 3>(); }
};

// Margins shrinking the invertibility domain D = {zeta != 0,
// |phi| < pi/2, |theta| < pi/2} to keep trajectories well conditioned.
struct DomainMargins {
    double tilt_margin{0.087};  // rad (~5 deg) off the pi/2 bound
    double zeta_min{1.0};       // m/s^2
};

// Raised when a state leaves domain D while the feedback is active.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Heading-rate row vector: psi_dot = b_psi(theta) . omega_b.
// Equals row 3 of att_kinematics(theta) exactly.
Vec3 b_psi(const EulerAngles& theta);

// Time derivative of b_psi along theta_dot = A(theta) omega_b.
Vec3 b_psi_dot(const EulerAngles& theta, const Vec3& omega_b);

// Heading drift term: h_psi = b_psi_dot . omega_b - b_psi . h_g.
double h_psi(const ExtendedState& x, const VehicleParams& p);

// Position third derivative: R([0 0 chi] + S(omega)[0 0 zeta]) + a_d_dot.
Vec3 jerk(const ExtendedState& x, const Vec3& a_d_dot);

// Position fourth derivative in raw form, with the body-rate
// derivatives substituted from the plant right-hand side. Brute-force
// route; must agree with snap_factored everywhere in D.
Vec3 snap_raw(const ExtendedState& x, const CommandBar& u,
              const DisturbanceSample& w, const VehicleParams& p);

// Known (state-dependent) snap drift term h_r.
Vec3 h_r(const ExtendedState& x, const VehicleParams& p);

// Unknown-disturbance snap term: R [zeta d_y, -zeta d_x, 0] + a_d_ddot.
// Only the tilt components of d reach the CoM chain, scaled by zeta.
Vec3 d_r(const ExtendedState& x, const DisturbanceSample& w);

// Heading disturbance term d_psi = b_psi(theta) . d.
double d_psi(const EulerAngles& theta, const Vec3& d);

// Decoupling matrix E(theta, zeta) with cached determinant.
DecouplingMatrixE decoupling_matrix(const EulerAngles& theta, double zeta);

// 2-norm condition number of E (SVD).
double condition_number(const DecouplingMatrixE& e);

// Membership test for the (margin-shrunk) invertibility domain D.
bool in_domain(const ExtendedState& x, const DomainMargins& margins);

// Disturbance-free diffeomorphism z = T(x).
FlatState flat_state(const ExtendedState& x, const VehicleParams& p);

// Inverse of flat_state: reconstructs the extended state realizing a
// given flat state (heading taken from z.psi). Requires |a + g| > 0.
// Used to initialize simulations exactly on a reference trajectory.
ExtendedState flat_to_state(const FlatState& z, const VehicleParams& p);

// Assembled input-output map: [r^(4); psi^(2)] = E ubar + [h_r; h_psi]
// + [d_r; d_psi]. Factored route, cross-checked against snap_raw.
struct OutputDerivatives {
    Vec3 snap{Vec3::Zero()};
    double psi_ddot{0.0};
};
OutputDerivatives snap_factored(const ExtendedState& x, const CommandBar& u,
                                const DisturbanceSample& w, const VehicleParams& p);

// Linearizing feedback ubar = E^-1 ([v_r; v_psi] - [h_r; h_psi]),
// solved blockwise (3x3 then scalar back-substitution). Throws
// DomainError outside D. When cond_out is non-null the condition
// number of E is written there; callers log near-singular solves.
CommandBar fl_feedback(const ExtendedState& x, const VirtualCommand& v,
                       const VehicleParams& p,
                       const DomainMargins& margins = {},
                       double* cond_out = nullptr);

// Transformed position-chain command u_r = B_r [u1_ddot, u2, u3].
Vec3 position_command_transform(const ExtendedState& x, const CommandBar& u);

// Heading coupling with the tilt commands: -t_th c_ps u2 + t_th s_ps u3.
// Satisfies u4 + h_psi_star = b_psi . [u2 u3 u4].
double h_psi_star(const EulerAngles& theta, double u2, double u3);

}  // namespace flquad
