#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <stdexcept>

namespace flquad {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Raised when the attitude kinematics degenerate (cos(pitch) ~ 0).
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Attitude angles, XYZ sequence: R_b^i = Rx(phi) * Ry(theta) * Rz(psi).
// The pitch angle must stay away from +-pi/2 for the kinematics to be
// defined.
struct EulerAngles {
    double phi{0.0};    // rad
    double theta{0.0};  // rad
    double psi{0.0};    // rad
};

// cos(pitch) below this raises SingularityError.
inline constexpr double kSingularityTol = 1e-6;

// Wrap an angle to (-pi, pi].
double wrap_pi(double angle);

// Cross-product matrix: skew(w) * v == w x v.
Mat3 skew(const Vec3& w);

// Euler-rate map A(theta): theta_dot = A(theta) * omega_b.
// Throws SingularityError when cos(theta) <= kSingularityTol.
Mat3 att_kinematics(const EulerAngles& theta);

// Body-to-inertial rotation, Rx(phi) * Ry(theta) * Rz(psi).
// This is the (unique, up to angle-role permutation) sequence whose
// inverse kinematics matrix equals att_kinematics(); the pairing is
// checked numerically in the test suite via R_dot = R * skew(omega).
Mat3 rot_body_to_inertial(const EulerAngles& theta);

// Gyroscopic coupling h_g = J^-1 (w x J w). J must be SPD; validated
// when vehicle parameters are loaded, not here.
Vec3 gyroscopic(const Vec3& w, const Mat3& J);

}  // namespace flquad
