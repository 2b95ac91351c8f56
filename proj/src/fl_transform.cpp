#include "flquad/fl_transform.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace flquad {

StateVec FlatState::to_vector() const
{
    StateVec z;
    z.segment<3>(0) = r;
    z.segment<3>(3) = v;
    z.segment<3>(6) = a;
    z.segment<3>(9) = s;
    z(12) = psi;
    z(13) = eta;
    return z;
}

FlatState FlatState::from_vector(const StateVec& z)
{
    FlatState f;
    f.r = z.segment<3>(0);
    f.v = z.segment<3>(3);
    f.a = z.segment<3>(6);
    f.s = z.segment<3>(9);
    f.psi = z(12);
    f.eta = z(13);
    return f;
}

Vec3 b_psi(const EulerAngles& theta)
{
    const double ct = std::cos(theta.theta);
    if (std::abs(ct) <= kSingularityTol) {
        throw SingularityError("b_psi: |cos(pitch)| below singularity tolerance");
    }
    const double tt = std::tan(theta.theta);
    return {-tt * std::cos(theta.psi), tt * std::sin(theta.psi), 1.0};
}

Vec3 b_psi_dot(const EulerAngles& theta, const Vec3& omega_b)
{
    const Vec3 theta_dot = att_kinematics(theta) * omega_b;
    const double ct = std::cos(theta.theta);
    const double tt = std::tan(theta.theta);
    const double cp = std::cos(theta.psi);
    const double sp = std::sin(theta.psi);
    const double pitch_rate = theta_dot(1);
    const double psi_rate = theta_dot(2);
    const double sec2 = 1.0 / (ct * ct);
    return {-pitch_rate * sec2 * cp + tt * sp * psi_rate,
            pitch_rate * sec2 * sp + tt * cp * psi_rate,
            0.0};
}

double h_psi(const ExtendedState& x, const VehicleParams& p)
{
    const Vec3 h_g = gyroscopic(x.omega_b, p.J);
    return b_psi_dot(x.theta, x.omega_b).dot(x.omega_b) - b_psi(x.theta).dot(h_g);
}

Vec3 jerk(const ExtendedState& x, const Vec3& a_d_dot)
{
    const Mat3 R = rot_body_to_inertial(x.theta);
    const Vec3 thrust_axis(0.0, 0.0, x.zeta);
    return R * (Vec3(0.0, 0.0, x.chi) + skew(x.omega_b) * thrust_axis) + a_d_dot;
}

Vec3 snap_raw(const ExtendedState& x, const CommandBar& u,
              const DisturbanceSample& w, const VehicleParams& p)
{
    const Mat3 R = rot_body_to_inertial(x.theta);
    const Vec3 w_dot = u.torque() - gyroscopic(x.omega_b, p.J) + w.d;
    const double wx = x.omega_b.x();
    const double wy = x.omega_b.y();
    const double wz = x.omega_b.z();
    return R * Vec3(w_dot.y() * x.zeta, -w_dot.x() * x.zeta, u.u1_ddot)
         + 2.0 * x.chi * (R * Vec3(wy, -wx, 0.0))
         + x.zeta * (R * Vec3(wx * wz, wy * wz, -(wx * wx + wy * wy)))
         + w.a_d_ddot;
}

Vec3 h_r(const ExtendedState& x, const VehicleParams& p)
{
    const Mat3 R = rot_body_to_inertial(x.theta);
    const Vec3 h_g = gyroscopic(x.omega_b, p.J);
    const double wx = x.omega_b.x();
    const double wy = x.omega_b.y();
    const double wz = x.omega_b.z();
    return x.zeta * (R * Vec3(wx * wz - h_g.y(),
                              wy * wz + h_g.x(),
                              -(wx * wx + wy * wy)))
         + 2.0 * x.chi * (R * Vec3(wy, -wx, 0.0));
}

Vec3 d_r(const ExtendedState& x, const DisturbanceSample& w)
{
    const Mat3 R = rot_body_to_inertial(x.theta);
    return R * Vec3(x.zeta * w.d.y(), -x.zeta * w.d.x(), 0.0) + w.a_d_ddot;
}

double d_psi(const EulerAngles& theta, const Vec3& d)
{
    return b_psi(theta).dot(d);
}

DecouplingMatrixE decoupling_matrix(const EulerAngles& theta, double zeta)
{
    const Mat3 R = rot_body_to_inertial(theta);
    Mat3 m;
    m << 0.0, 0.0, zeta,
         0.0, -zeta, 0.0,
         1.0, 0.0, 0.0;
    const Vec3 bp = b_psi(theta);

    DecouplingMatrixE e;
    e.E.topLeftCorner<3, 3>() = R * m;
    e.E.topRightCorner<3, 1>().setZero();
    e.E.row(3) << 0.0, bp.x(), bp.y(), 1.0;
    e.det = zeta * zeta;  // block-triangular: det B_r = zeta^2 det R
    return e;
}

double condition_number(const DecouplingMatrixE& e)
{
    Eigen::JacobiSVD<Mat4> svd(e.E);
    const auto& sv = svd.singularValues();
    if (sv(3) == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return sv(0) / sv(3);
}

bool in_domain(const ExtendedState& x, const DomainMargins& margins)
{
    const double tilt_lim = M_PI / 2.0 - margins.tilt_margin;
    return x.zeta > margins.zeta_min
        && std::abs(x.theta.phi) < tilt_lim
        && std::abs(x.theta.theta) < tilt_lim;
}

FlatState flat_state(const ExtendedState& x, const VehicleParams& p)
{
    const Mat3 R = rot_body_to_inertial(x.theta);
    FlatState z;
    z.r = x.r;
    z.v = x.v;
    z.a = R * Vec3(0.0, 0.0, x.zeta) - p.gravity();
    z.s = jerk(x, Vec3::Zero());
    z.psi = x.theta.psi;
    z.eta = b_psi(x.theta).dot(x.omega_b);
    return z;
}

ExtendedState flat_to_state(const FlatState& z, const VehicleParams& p)
{
    const Vec3 f = z.a + p.gravity();  // = R [0 0 zeta]
    const double zeta = f.norm();
    if (zeta <= kSingularityTol) {
        throw DomainError("flat_to_state: thrust vector magnitude ~ 0 (free fall)");
    }
    const Vec3 b3 = f / zeta;  // body z axis in inertial frame
    // Third column of Rx(phi) Ry(theta) Rz(psi) is
    // [sin(theta), -sin(phi) cos(theta), cos(phi) cos(theta)].
    const double pitch = std::asin(std::clamp(b3.x(), -1.0, 1.0));
    const double roll = std::atan2(-b3.y(), b3.z());

    ExtendedState x;
    x.r = z.r;
    x.v = z.v;
    x.theta = {roll, pitch, z.psi};
    x.zeta = zeta;

    // R^T s = [zeta w_y, -zeta w_x, chi]
    const Mat3 R = rot_body_to_inertial(x.theta);
    const Vec3 sb = R.transpose() * z.s;
    const double wy = sb.x() / zeta;
    const double wx = -sb.y() / zeta;
    x.chi = sb.z();

    // eta = b_psi . omega recovers the yaw rate component.
    const Vec3 bp = b_psi(x.theta);
    const double wz = z.eta - bp.x() * wx - bp.y() * wy;
    x.omega_b = {wx, wy, wz};
    return x;
}

OutputDerivatives snap_factored(const ExtendedState& x, const CommandBar& u,
                                const DisturbanceSample& w, const VehicleParams& p)
{
    const DecouplingMatrixE e = decoupling_matrix(x.theta, x.zeta);
    const Vec4 eu = e.E * u.to_vector();
    OutputDerivatives out;
    out.snap = eu.head<3>() + h_r(x, p) + d_r(x, w);
    out.psi_ddot = eu(3) + h_psi(x, p) + d_psi(x.theta, w.d);
    return out;
}

CommandBar fl_feedback(const ExtendedState& x, const VirtualCommand& v,
                       const VehicleParams& p, const DomainMargins& margins,
                       double* cond_out)
{
    if (!in_domain(x, margins)) {
        throw DomainError("fl_feedback: state outside invertibility domain D");
    }
    const DecouplingMatrixE e = decoupling_matrix(x.theta, x.zeta);
    if (cond_out != nullptr) {
        *cond_out = condition_number(e);
    }

    // B_r = R M with M = [0 0 z; 0 -z 0; 1 0 0]; invert blockwise.
    const Mat3 R = rot_body_to_inertial(x.theta);
    const Vec3 c = R.transpose() * (v.v_r - h_r(x, p));
    CommandBar u;
    u.u1_ddot = c.z();
    u.u2 = -c.y() / x.zeta;
    u.u3 = c.x() / x.zeta;
    u.u4 = (v.v_psi - h_psi(x, p)) - h_psi_star(x.theta, u.u2, u.u3);
    return u;
}

Vec3 position_command_transform(const ExtendedState& x, const CommandBar& u)
{
    const DecouplingMatrixE e = decoupling_matrix(x.theta, x.zeta);
    return e.B_r() * Vec3(u.u1_ddot, u.u2, u.u3);
}

double h_psi_star(const EulerAngles& theta, double u2, double u3)
{
    const Vec3 bp = b_psi(theta);
    return bp.x() * u2 + bp.y() * u3;
}

}  // namespace flquad
