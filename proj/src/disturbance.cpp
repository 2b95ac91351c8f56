#include "flquad/disturbance.hpp"

#include <cmath>

namespace flquad {

double SignalSpec::value(double t) const
{
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return amplitude;
        case Kind::Sinusoid: return amplitude * std::sin(freq * t + phase);
    }
    return 0.0;
}

double SignalSpec::deriv1(double t) const
{
    if (kind == Kind::Sinusoid) {
        return amplitude * freq * std::cos(freq * t + phase);
    }
    return 0.0;
}

double SignalSpec::deriv2(double t) const
{
    if (kind == Kind::Sinusoid) {
        return -amplitude * freq * freq * std::sin(freq * t + phase);
    }
    return 0.0;
}

bool DisturbanceSpec::is_zero() const
{
    for (const auto& s : d) {
        if (s.kind != SignalSpec::Kind::Zero) return false;
    }
    for (const auto& s : a_d) {
        if (s.kind != SignalSpec::Kind::Zero) return false;
    }
    return true;
}

DisturbanceSample disturbance_eval(const DisturbanceSpec& spec, double t)
{
    DisturbanceSample w;
    for (int i = 0; i < 3; ++i) {
        w.d(i) = spec.d[static_cast<size_t>(i)].value(t);
        w.a_d(i) = spec.a_d[static_cast<size_t>(i)].value(t);
        w.a_d_dot(i) = spec.a_d[static_cast<size_t>(i)].deriv1(t);
        w.a_d_ddot(i) = spec.a_d[static_cast<size_t>(i)].deriv2(t);
    }
    return w;
}

}  // namespace flquad
