#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flquad/fl_transform.hpp"
#include "flquad/verify.hpp"

#include <cmath>

using namespace flquad;

namespace {

const VehicleParams params = [] {
    VehicleParams p;
    p.J = Vec3(0.021, 0.024, 0.039).asDiagonal();
    return p;
}();

}  // namespace

TEST_CASE("b_psi closed form")
{
    CHECK((b_psi({0.4, 0.0, -2.0}) - Vec3(0, 0, 1)).norm() == 0.0);
    const Vec3 b = b_psi({0.0, M_PI / 4, 0.0});
    CHECK(b.x() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(b.y() == 0.0);
    CHECK(b.z() == 1.0);
    CHECK_THROWS_AS(b_psi({0, M_PI / 2, 0}), SingularityError);
}

TEST_CASE("b_psi . omega equals the yaw rate from A(theta)")
{
    StateSampler s(99);
    for (int i = 0; i < 200; ++i) {
        const ExtendedState x = s.state();
        const double via_b = b_psi(x.theta).dot(x.omega_b);
        const double via_A = (att_kinematics(x.theta) * x.omega_b)(2);
        CHECK(via_b == doctest::Approx(via_A).epsilon(1e-12));
    }
}

TEST_CASE("b_psi_dot analytic form")
{
    CHECK(b_psi_dot({0.3, 0.5, -1.0}, Vec3::Zero()).norm() == 0.0);

    // zero attitude, pure pitch rate q: d/dt[-tan(th)cos(psi)] = -q
    const double q = 0.37;
    const Vec3 bd = b_psi_dot({0, 0, 0}, {0, q, 0});
    CHECK(bd.x() == doctest::Approx(-q).epsilon(1e-14));
    CHECK(bd.y() == 0.0);
    CHECK(bd.z() == 0.0);
}

TEST_CASE("b_psi_dot matches central differences of b_psi along a trajectory")
{
    StateSampler s(3);
    const double h = 1e-5;
    for (int i = 0; i < 50; ++i) {
        const ExtendedState x = s.state();
        const Vec3 theta_dot = att_kinematics(x.theta) * x.omega_b;
        const auto at = [&](double dt) {
            const Vec3 th = Vec3(x.theta.phi, x.theta.theta, x.theta.psi) + dt * theta_dot;
            return b_psi({th.x(), th.y(), th.z()});
        };
        const Vec3 fd = (at(h) - at(-h)) / (2.0 * h);
        CHECK((fd - b_psi_dot(x.theta, x.omega_b)).norm() < 1e-6);
    }
}

TEST_CASE("h_psi vanishing cases")
{
    ExtendedState x;
    x.zeta = 9.81;
    CHECK(h_psi(x, params) == 0.0);

    // isotropic inertia at level attitude: h_g = 0, only the b_psi_dot
    // term remains
    VehicleParams iso;
    iso.J = Mat3::Identity() * 0.02;
    x.omega_b = {0.3, -0.2, 0.5};
    CHECK(h_psi(x, iso) ==
          doctest::Approx(b_psi_dot(x.theta, x.omega_b).dot(x.omega_b)).epsilon(1e-13));
}

TEST_CASE("jerk closed form")
{
    ExtendedState x;
    x.zeta = 9.81;

    x.chi = 1.0;
    CHECK((jerk(x, Vec3::Zero()) - Vec3(0, 0, 1)).norm() == 0.0);

    x.chi = 0.0;
    x.omega_b = {0, 0.1, 0};
    CHECK((jerk(x, Vec3::Zero()) - Vec3(0.981, 0, 0)).norm() < 1e-15);

    x.omega_b.setZero();
    CHECK(jerk(x, Vec3::Zero()).norm() == 0.0);
}

TEST_CASE("snap_raw special cases")
{
    ExtendedState x;
    x.zeta = 9.81;
    CommandBar u;
    u.u1_ddot = 2.5;
    CHECK((snap_raw(x, u, {}, params) - Vec3(0, 0, 2.5)).norm() == 0.0);

    auto [trim, trim_u] = hover_trim(params, Vec3::Zero(), 0.0);
    CHECK(snap_raw(trim, trim_u, {}, params).norm() == 0.0);
}

TEST_CASE("h_r closed form")
{
    ExtendedState x;
    x.zeta = 9.81;
    CHECK(h_r(x, params).norm() == 0.0);

    VehicleParams iso;
    iso.J = Mat3::Identity() * 0.02;
    x.omega_b = {0.1, 0, 0};
    const Vec3 h1 = h_r(x, iso);
    CHECK(h1.x() == 0.0);
    CHECK(h1.y() == 0.0);
    CHECK(h1.z() == doctest::Approx(-0.0981).epsilon(1e-13));

    x.zeta = 0.0;
    x.chi = 1.0;
    x.omega_b = {0, 0.5, 0};
    CHECK((h_r(x, iso) - Vec3(1, 0, 0)).norm() < 1e-15);
}

TEST_CASE("d_r passes only amplified tilt disturbances")
{
    ExtendedState x;
    x.zeta = 9.81;
    CHECK(d_r(x, {}).norm() == 0.0);

    DisturbanceSample w;
    w.d = {0.01, 0, 0};
    const Vec3 d1 = d_r(x, w);
    CHECK(d1.x() == 0.0);
    CHECK(d1.y() == doctest::Approx(-0.0981).epsilon(1e-13));
    CHECK(d1.z() == 0.0);

    // linear in zeta
    ExtendedState x2 = x;
    x2.zeta *= 2.0;
    CHECK((d_r(x2, w) - 2.0 * d1).norm() < 1e-15);

    // linear in d
    DisturbanceSample w3;
    w3.d = 3.0 * w.d;
    CHECK((d_r(x, w3) - 3.0 * d1).norm() < 1e-15);
}

TEST_CASE("decoupling matrix at hover")
{
    const DecouplingMatrixE e = decoupling_matrix({0, 0, 0}, 9.81);
    Mat3 br;
    br << 0, 0, 9.81,
          0, -9.81, 0,
          1, 0, 0;
    CHECK((e.B_r() - br).norm() == 0.0);
    CHECK((e.E.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).norm() == 0.0);
    CHECK((e.E.topRightCorner<3, 1>()).norm() == 0.0);
    CHECK(e.det == doctest::Approx(9.81 * 9.81));
}

TEST_CASE("det E = zeta^2, singular at zeta = 0")
{
    StateSampler s(5);
    for (int i = 0; i < 1000; ++i) {
        const ExtendedState x = s.state();
        const DecouplingMatrixE e = decoupling_matrix(x.theta, x.zeta);
        CHECK(std::abs(e.E.determinant() - x.zeta * x.zeta)
              / (x.zeta * x.zeta) < 1e-12);
    }
    const DecouplingMatrixE e0 = decoupling_matrix({0.3, 0.2, 0.1}, 0.0);
    CHECK(e0.det == 0.0);
    CHECK(std::abs(e0.E.determinant()) < 1e-15);
}

TEST_CASE("domain membership")
{
    DomainMargins m;
    ExtendedState x;
    x.zeta = 9.81;
    x.theta = {0.3, -0.2, 0.0};
    CHECK(in_domain(x, m));
    x.zeta = 0.0;
    CHECK_FALSE(in_domain(x, m));
    x.zeta = 9.81;
    x.theta.theta = M_PI / 2;
    CHECK_FALSE(in_domain(x, m));
    x.theta.theta = 0.0;
    x.theta.phi = M_PI / 2 - 0.01;  // inside pi/2 but inside the margin band
    CHECK_FALSE(in_domain(x, m));
}

TEST_CASE("flat state of the hover trim")
{
    auto [x, u] = hover_trim(params, {1, 2, 3}, 0.8);
    const FlatState z = flat_state(x, params);
    CHECK((z.r - Vec3(1, 2, 3)).norm() == 0.0);
    CHECK(z.v.norm() == 0.0);
    CHECK(z.a.norm() == 0.0);
    CHECK(z.s.norm() == 0.0);
    CHECK(z.psi == 0.8);
    CHECK(z.eta == 0.0);
}

TEST_CASE("flat_to_state inverts flat_state")
{
    StateSampler s(11);
    for (int i = 0; i < 500; ++i) {
        ExtendedState x = s.state();
        x.theta.psi = wrap_pi(x.theta.psi);
        const FlatState z = flat_state(x, params);
        const ExtendedState back = flat_to_state(z, params);
        CHECK((back.to_vector() - x.to_vector()).lpNorm<Eigen::Infinity>() < 1e-9);
    }
}

TEST_CASE("snap_factored equals the raw route and the hover case")
{
    VerifyOptions opt;
    opt.samples = 500;
    const CheckResult r = check_snap_identity(opt);
    CHECK(r.passed);

    auto [x, u0] = hover_trim(params, Vec3::Zero(), 0.0);
    CommandBar u;
    u.u1_ddot = 3.0;
    const OutputDerivatives od = snap_factored(x, u, {}, params);
    CHECK((od.snap - Vec3(0, 0, 3)).norm() == 0.0);
    CHECK(od.psi_ddot == 0.0);

    const OutputDerivatives quiet = snap_factored(x, {}, {}, params);
    CHECK(quiet.snap.norm() == 0.0);
    CHECK(quiet.psi_ddot == 0.0);
}

TEST_CASE("fl_feedback at hover")
{
    auto [x, u0] = hover_trim(params, Vec3::Zero(), 0.0);
    CHECK(fl_feedback(x, {}, params).to_vector().norm() == 0.0);

    VirtualCommand v;
    v.v_r = {0, 0, 2};
    const CommandBar u = fl_feedback(x, v, params);
    CHECK((u.to_vector() - Vec4(2, 0, 0, 0)).norm() < 1e-15);
}

TEST_CASE("fl_feedback round-trip reproduces the virtual command")
{
    StateSampler s(21);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const ExtendedState x = s.state();
        const VirtualCommand v = s.virtual_command();
        double cond = 0.0;
        const CommandBar u = fl_feedback(x, v, params, {}, &cond);
        CHECK(cond >= 1.0);
        const OutputDerivatives od = snap_factored(x, u, {}, params);
        worst = std::max(worst, (od.snap - v.v_r).lpNorm<Eigen::Infinity>());
        worst = std::max(worst, std::abs(od.psi_ddot - v.v_psi));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("fl_feedback rejects states outside D")
{
    ExtendedState x;
    x.zeta = 0.0;
    CHECK_THROWS_AS(fl_feedback(x, {}, params), DomainError);
    x.zeta = 9.81;
    x.theta.phi = M_PI / 2 - 0.01;
    CHECK_THROWS_AS(fl_feedback(x, {}, params), DomainError);
}

TEST_CASE("position command transform")
{
    ExtendedState x;
    x.zeta = 9.81;
    CommandBar u;
    u.u1_ddot = 2.0;
    u.u4 = 123.0;  // must be ignored
    CHECK((position_command_transform(x, u) - Vec3(0, 0, 2)).norm() == 0.0);
    CHECK(position_command_transform(x, {}).norm() == 0.0);

    StateSampler s(31);
    for (int i = 0; i < 200; ++i) {
        const ExtendedState xs = s.state();
        const CommandBar us = s.command();
        const DecouplingMatrixE e = decoupling_matrix(xs.theta, xs.zeta);
        const Vec3 diff = position_command_transform(xs, us)
                        - (e.E * us.to_vector()).head<3>();
        CHECK(diff.lpNorm<Eigen::Infinity>() < 1e-12);
    }
}

TEST_CASE("h_psi_star couples the tilt commands into the heading row")
{
    CHECK(h_psi_star({0.7, 0.0, 1.3}, 5.0, -2.0) == 0.0);
    CHECK(h_psi_star({0, M_PI / 4, 0}, 1.0, 2.0) == doctest::Approx(-1.0).epsilon(1e-14));

    StateSampler s(41);
    for (int i = 0; i < 200; ++i) {
        const ExtendedState x = s.state();
        const CommandBar u = s.command();
        const double lhs = u.u4 + h_psi_star(x.theta, u.u2, u.u3);
        CHECK(lhs == doctest::Approx(b_psi(x.theta).dot(u.torque())).epsilon(1e-12));
    }
}

TEST_CASE("condition number of E grows monotonically with pitch")
{
    double prev = 0.0;
    for (int i = 0; i <= 50; ++i) {
        const double pitch = (M_PI / 2 - 0.02) * i / 50.0;
        const double c = condition_number(decoupling_matrix({0.1, pitch, 0.4}, 9.81));
        if (i > 0) CHECK(c > prev);
        prev = c;
    }
}

TEST_CASE("numerical Jacobian of T has rank 14")
{
    VerifyOptions opt;
    opt.samples = 1000;  // 10 random states
    const CheckResult r = check_transform_rank(opt);
    CHECK(r.passed);
}
