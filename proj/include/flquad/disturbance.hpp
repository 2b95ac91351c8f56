#pragma once

#include "flquad/extended_model.hpp"

#include <array>

namespace flquad {

// Deterministic per-channel disturbance signal. Sinusoid and constant
// only: the snap chain needs the first and second time derivatives of
// a_d in closed form, which rules out stochastic noise here.
struct SignalSpec {
    enum class Kind { Zero, Constant, Sinusoid };
    Kind kind{Kind::Zero};
    double amplitude{0.0};  // value for Constant, amplitude for Sinusoid
    double freq{0.0};       // rad/s
    double phase{0.0};      // rad

    double value(double t) const;
    double deriv1(double t) const;
    double deriv2(double t) const;
};

struct DisturbanceSpec {
    std::array<SignalSpec, 3> d{};    // rad/s^2, body tilt/yaw channels
    std::array<SignalSpec, 3> a_d{};  // m/s^2, translational channels

    bool is_zero() const;
};

// Sample with analytically consistent derivatives.
DisturbanceSample disturbance_eval(const DisturbanceSpec& spec, double t);

}  // namespace flquad
