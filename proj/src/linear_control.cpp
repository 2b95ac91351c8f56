#include "flquad/linear_control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flquad {

namespace {

double binomial(int n, int k)
{
    double c = 1.0;
    for (int i = 0; i < k; ++i) {
        c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    return c;
}

// 9th-order smoothstep: s(0)=0, s(1)=1, derivatives 1..4 zero at both
// ends. Coefficients of 126 t^5 - 420 t^6 + 540 t^7 - 315 t^8 + 70 t^9.
constexpr std::array<double, 10> kBlend{
    0.0, 0.0, 0.0, 0.0, 0.0, 126.0, -420.0, 540.0, -315.0, 70.0};

// Value and first four derivatives of the blend at normalized tau.
std::array<double, 5> blend_derivs(double tau)
{
    std::array<double, 5> out{};
    for (int d = 0; d <= 4; ++d) {
        double acc = 0.0;
        for (int k = 9; k >= d; --k) {
            double coef = kBlend[static_cast<size_t>(k)];
            for (int j = 0; j < d; ++j) {
                coef *= static_cast<double>(k - j);
            }
            acc = acc * tau + coef;
        }
        out[static_cast<size_t>(d)] = acc;
    }
    return out;
}

}  // namespace

GainSet GainSet::make(double lambda_pos, double lambda_psi)
{
    GainSet g;
    g.lambda_pos = lambda_pos;
    g.lambda_psi = lambda_psi;
    const auto kp = chain_gains(4, lambda_pos);
    const auto kh = chain_gains(2, lambda_psi);
    std::copy(kp.begin(), kp.end(), g.k_pos.begin());
    std::copy(kh.begin(), kh.end(), g.k_psi.begin());
    return g;
}

std::vector<double> chain_gains(int order, double lambda)
{
    if (order != 2 && order != 4) {
        throw std::invalid_argument("chain_gains: order must be 2 or 4");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("chain_gains: lambda must be positive");
    }
    std::vector<double> k(static_cast<size_t>(order));
    for (int i = 0; i < order; ++i) {
        k[static_cast<size_t>(i)] = binomial(order, i) * std::pow(lambda, order - i);
    }
    return k;
}

FlatState ReferencePoint::flat() const
{
    FlatState z;
    z.r = r;
    z.v = v;
    z.a = a;
    z.s = s;
    z.psi = psi;
    z.eta = psi_dot;
    return z;
}

VirtualCommand tracking_command(const FlatState& z, const ReferencePoint& ref,
                                const GainSet& gains)
{
    VirtualCommand v;
    v.v_r = ref.r4
          + gains.k_pos[0] * (ref.r - z.r)
          + gains.k_pos[1] * (ref.v - z.v)
          + gains.k_pos[2] * (ref.a - z.a)
          + gains.k_pos[3] * (ref.s - z.s);
    v.v_psi = ref.psi_ddot
            + gains.k_psi[0] * wrap_pi(ref.psi - z.psi)
            + gains.k_psi[1] * (ref.psi_dot - z.eta);
    return v;
}

void validate(const ReferenceSpec& spec)
{
    if (const auto* c = std::get_if<CircleRef>(&spec)) {
        if (!(c->radius > 0.0)) {
            throw std::invalid_argument("circle reference: radius must be > 0");
        }
        if (c->rate < 0.0) {
            throw std::invalid_argument("circle reference: rate must be >= 0");
        }
    } else if (const auto* w = std::get_if<WaypointRef>(&spec)) {
        if (w->waypoints.size() < 2) {
            throw std::invalid_argument("waypoint reference: need at least two waypoints");
        }
        if (w->headings.size() != w->waypoints.size()) {
            throw std::invalid_argument("waypoint reference: one heading per waypoint");
        }
        if (!(w->segment_duration > 0.0)) {
            throw std::invalid_argument("waypoint reference: segment duration must be > 0");
        }
    }
}

namespace {

ReferencePoint eval_hover(const HoverRef& h, double t)
{
    ReferencePoint p;
    p.r = h.r0;
    p.psi = h.psi0;
    p.t = t;
    return p;
}

ReferencePoint eval_circle(const CircleRef& c, double t)
{
    const double w = c.rate;
    const double ph = w * t;
    const double cs = std::cos(ph);
    const double sn = std::sin(ph);
    ReferencePoint p;
    p.r = c.center + c.radius * Vec3(cs, sn, 0.0);
    p.v = c.radius * w * Vec3(-sn, cs, 0.0);
    p.a = c.radius * w * w * Vec3(-cs, -sn, 0.0);
    p.s = c.radius * w * w * w * Vec3(sn, -cs, 0.0);
    p.r4 = c.radius * w * w * w * w * Vec3(cs, sn, 0.0);
    p.psi = c.psi0;
    p.t = t;
    return p;
}

ReferencePoint eval_waypoints(const WaypointRef& w, double t)
{
    const size_t nseg = w.waypoints.size() - 1;
    const double T = w.segment_duration;
    double tc = std::clamp(t, 0.0, static_cast<double>(nseg) * T);
    size_t seg = std::min(static_cast<size_t>(tc / T), nseg - 1);
    const double tau = (tc - static_cast<double>(seg) * T) / T;

    const auto b = blend_derivs(tau);
    const Vec3 dr = w.waypoints[seg + 1] - w.waypoints[seg];
    const double dpsi = wrap_pi(w.headings[seg + 1] - w.headings[seg]);

    ReferencePoint p;
    p.r = w.waypoints[seg] + b[0] * dr;
    p.v = (b[1] / T) * dr;
    p.a = (b[2] / (T * T)) * dr;
    p.s = (b[3] / (T * T * T)) * dr;
    p.r4 = (b[4] / (T * T * T * T)) * dr;
    p.psi = w.headings[seg] + b[0] * dpsi;
    p.psi_dot = (b[1] / T) * dpsi;
    p.psi_ddot = (b[2] / (T * T)) * dpsi;
    p.t = t;
    return p;
}

}  // namespace

ReferencePoint reference(const ReferenceSpec& spec, double t)
{
    validate(spec);
    return std::visit(
        [t](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, HoverRef>) {
                return eval_hover(s, t);
            } else if constexpr (std::is_same_v<S, CircleRef>) {
                return eval_circle(s, t);
            } else {
                return eval_waypoints(s, t);
            }
        },
        spec);
}

}  // namespace flquad
