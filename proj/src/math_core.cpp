#include "flquad/math_core.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Geometry>

#include <cmath>

namespace flquad {

double wrap_pi(double angle)
{
    double a = std::remainder(angle, 2.0 * M_PI);
    if (a <= -M_PI) {
        a += 2.0 * M_PI;
    }
    return a;
}

Mat3 skew(const Vec3& w)
{
    Mat3 s;
    s <<    0.0, -w.z(),  w.y(),
          w.z(),    0.0, -w.x(),
         -w.y(),  w.x(),    0.0;
    return s;
}

Mat3 att_kinematics(const EulerAngles& theta)
{
    const double ct = std::cos(theta.theta);
    const double st = std::sin(theta.theta);
    const double cp = std::cos(theta.psi);
    const double sp = std::sin(theta.psi);
    if (std::abs(ct) <= kSingularityTol) {
        throw SingularityError("att_kinematics: |cos(pitch)| below singularity tolerance");
    }
    Mat3 a;
    a <<       cp / ct,      -sp / ct, 0.0,
                    sp,            cp, 0.0,
         -st * cp / ct,  st * sp / ct, 1.0;
    return a;
}

Mat3 rot_body_to_inertial(const EulerAngles& theta)
{
    const double cf = std::cos(theta.phi);
    const double sf = std::sin(theta.phi);
    const double ct = std::cos(theta.theta);
    const double st = std::sin(theta.theta);
    const double cp = std::cos(theta.psi);
    const double sp = std::sin(theta.psi);

    Mat3 rx, ry, rz;
    rx << 1.0, 0.0, 0.0,
          0.0,  cf, -sf,
          0.0,  sf,  cf;
    ry <<  ct, 0.0,  st,
          0.0, 1.0, 0.0,
          -st, 0.0,  ct;
    rz <<  cp, -sp, 0.0,
           sp,  cp, 0.0,
          0.0, 0.0, 1.0;
    return rx * ry * rz;
}

Vec3 gyroscopic(const Vec3& w, const Mat3& J)
{
    return J.ldlt().solve(w.cross(J * w));
}

}  // namespace flquad
