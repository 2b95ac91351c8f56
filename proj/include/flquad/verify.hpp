#pragma once

#include "flquad/simulator.hpp"

#include <random>
#include <string>
#include <vector>

namespace flquad {

struct VerifyOptions {
    int samples{10000};       // sample count for the randomized identities
    unsigned long seed{12345};
    // Test-harness hook: flips the sign of h_r inside the factored snap
    // route so the raw-vs-factored snap identity check must fail.
    bool corrupt_h_r_sign{false};
};

struct CheckResult {
    std::string id;       // stable key, e.g. "snap_identity"
    std::string label;    // one-line description
    bool passed{true};
    bool skipped{false};
    double metric{0.0};   // worst observed value
    double tolerance{0.0};
    std::string detail;
};

// Random extended states and commands inside the sampling box used by
// the identity checks (|omega| <= 5, |phi|,|theta| <= 1.2, zeta in
// [2,20], |ubar| <= 10).
class StateSampler {
public:
    explicit StateSampler(unsigned long seed) : rng_(seed) {}
    ExtendedState state();
    CommandBar command();
    DisturbanceSample disturbance();
    VirtualCommand virtual_command();
    double uniform(double lo, double hi);

private:
    std::mt19937_64 rng_;
};

// Individual checks, keyed by the relation they certify.
CheckResult check_kinematic_consistency();                       // R_dot = R S(omega)
CheckResult check_bpsi_row3(const VerifyOptions& opt);           // heading row identity
CheckResult check_heading_fd_slope();                            // psi chain, O(h^2)
CheckResult check_jerk_fd();                                     // jerk vs FD of accel
CheckResult check_snap_identity(const VerifyOptions& opt);       // raw vs factored snap
CheckResult check_determinant_law(const VerifyOptions& opt);     // det E = zeta^2
CheckResult check_cond_monotone();                               // cond(E) vs pitch
CheckResult check_feedback_roundtrip(const VerifyOptions& opt);  // feedback inverse
CheckResult check_transform_rank(const VerifyOptions& opt);      // Jacobian rank 14
CheckResult check_linearization_exactness();                     // chains vs plant
CheckResult check_disturbance_passthrough();                     // residual = d_r
CheckResult check_tracking_sanity();                             // closed-loop decay
CheckResult check_ur_identity(const VerifyOptions& opt);         // u_r vs E upper block
CheckResult check_hpsi_star_identity(const VerifyOptions& opt);  // last-row identity
CheckResult check_hover_trim();                                  // trim is exact
CheckResult check_domain_guard();                                // clean abort

// The full ledger, in derivation order.
std::vector<CheckResult> run_verification(const VerifyOptions& opt);

}  // namespace flquad
