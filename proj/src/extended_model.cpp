#include "flquad/extended_model.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace flquad {

StateVec ExtendedState::to_vector() const
{
    StateVec x;
    x.segment<3>(0) = r;
    x.segment<3>(3) = v;
    x(6) = theta.phi;
    x(7) = theta.theta;
    x(8) = theta.psi;
    x.segment<3>(9) = omega_b;
    x(12) = zeta;
    x(13) = chi;
    return x;
}

ExtendedState ExtendedState::from_vector(const StateVec& x)
{
    ExtendedState s;
    s.r = x.segment<3>(0);
    s.v = x.segment<3>(3);
    s.theta = {x(6), x(7), x(8)};
    s.omega_b = x.segment<3>(9);
    s.zeta = x(12);
    s.chi = x(13);
    return s;
}

void VehicleParams::validate() const
{
    if (!J.allFinite() || (J - J.transpose()).norm() > 1e-9 * J.norm()) {
        throw std::invalid_argument("VehicleParams: inertia matrix must be symmetric");
    }
    Eigen::LLT<Mat3> llt(J);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("VehicleParams: inertia matrix must be positive definite");
    }
    if (!(g_mag > 0.0)) {
        throw std::invalid_argument("VehicleParams: gravity magnitude must be positive");
    }
    if (!(zeta_min > 0.0)) {
        throw std::invalid_argument("VehicleParams: zeta_min must be positive");
    }
}

StateVec rhs(const ExtendedState& x, const CommandBar& u,
             const DisturbanceSample& w, const VehicleParams& p)
{
    const Mat3 R = rot_body_to_inertial(x.theta);
    const Mat3 A = att_kinematics(x.theta);

    StateVec dx;
    dx.segment<3>(0) = x.v;
    dx.segment<3>(3) = R * Vec3(0.0, 0.0, x.zeta) - p.gravity() + w.a_d;
    dx.segment<3>(6) = A * x.omega_b;
    dx.segment<3>(9) = u.torque() - gyroscopic(x.omega_b, p.J) + w.d;
    dx(12) = x.chi;
    dx(13) = u.u1_ddot;
    return dx;
}

std::pair<ExtendedState, CommandBar> hover_trim(const VehicleParams& p,
                                                const Vec3& r0, double psi0)
{
    ExtendedState x;
    x.r = r0;
    x.v = Vec3::Zero();
    x.theta = {0.0, 0.0, psi0};
    x.omega_b = Vec3::Zero();
    x.zeta = p.g_mag;
    x.chi = 0.0;
    return {x, CommandBar{}};
}

}  // namespace flquad
