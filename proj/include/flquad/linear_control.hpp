#pragma once

#include "flquad/fl_transform.hpp"

#include <array>
#include <variant>
#include <vector>

namespace flquad {

// Pole-placement gains for the two decoupled chains: 4th-order
// position (per axis) and 2nd-order heading. All closed-loop poles
// coincident at -lambda (binomial coefficients of (s + lambda)^n).
struct GainSet {
    std::array<double, 4> k_pos{};  // on [r, v, a, s] error, lowest order first
    std::array<double, 2> k_psi{};  // on [psi, eta] error
    double lambda_pos{2.0};         // rad/s
    double lambda_psi{3.0};         // rad/s

    static GainSet make(double lambda_pos, double lambda_psi);
};

// Gains placing all poles of an order-n integrator chain at -lambda:
// coefficients of (s + lambda)^n without the leading s^n term, lowest
// order first. Supported orders: 2 and 4.
std::vector<double> chain_gains(int order, double lambda);

// Reference sample with all derivatives the chain structure needs:
// position through snap, heading through its second derivative.
struct ReferencePoint {
    Vec3 r{Vec3::Zero()};
    Vec3 v{Vec3::Zero()};
    Vec3 a{Vec3::Zero()};
    Vec3 s{Vec3::Zero()};
    Vec3 r4{Vec3::Zero()};
    double psi{0.0};
    double psi_dot{0.0};
    double psi_ddot{0.0};
    double t{0.0};

    // The flat state this reference occupies (feedforward target).
    FlatState flat() const;
};

// Feedforward + pole-placed state feedback on the flat state:
// v_r = r_ref^(4) + K (z_ref - z) per axis, v_psi analogous with the
// heading error wrapped to (-pi, pi].
VirtualCommand tracking_command(const FlatState& z, const ReferencePoint& ref,
                                const GainSet& gains);

// ---- reference trajectories --------------------------------------

struct HoverRef {
    Vec3 r0{Vec3::Zero()};
    double psi0{0.0};
};

// Circle of radius R at angular rate w in the horizontal plane,
// centered at `center`, constant heading.
struct CircleRef {
    Vec3 center{Vec3::Zero()};
    double radius{1.0};    // m, > 0
    double rate{0.5};      // rad/s, >= 0
    double psi0{0.0};
};

// Rest-to-rest waypoint sequence joined by smoothstep blends with four
// zero derivatives at each junction (position) and two (heading), so
// every chain derivative is continuous.
struct WaypointRef {
    std::vector<Vec3> waypoints;       // >= 2 points
    std::vector<double> headings;      // one per waypoint
    double segment_duration{4.0};      // s, > 0
};

using ReferenceSpec = std::variant<HoverRef, CircleRef, WaypointRef>;

// Throws std::invalid_argument on bad parameters (radius <= 0, fewer
// than two waypoints, ...).
void validate(const ReferenceSpec& spec);

// Analytically exact sample of the selected trajectory at time t.
ReferencePoint reference(const ReferenceSpec& spec, double t);

}  // namespace flquad
