#include "flquad/scenario_io.hpp"
#include "flquad/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

// Stable exit codes, documented in the README:
// 0 success, 2 configuration error, 3 domain abort, 4 verification failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitVerify = 4;

int run_simulate(const std::string& scenario_path, const std::string& out_dir,
                 double dt_override, double duration_override,
                 double lambda_pos, double lambda_psi)
{
    flquad::Scenario sc = flquad::load_scenario(scenario_path);
    if (dt_override > 0.0) sc.step = dt_override;
    if (duration_override > 0.0) sc.duration = duration_override;
    if (lambda_pos > 0.0 || lambda_psi > 0.0) {
        sc.gains = flquad::GainSet::make(
            lambda_pos > 0.0 ? lambda_pos : sc.gains.lambda_pos,
            lambda_psi > 0.0 ? lambda_psi : sc.gains.lambda_psi);
    }
    sc.validate();  // refuse bad scenarios before integration

    const flquad::SimResult result = flquad::simulate(sc);

    std::filesystem::create_directories(out_dir);
    const auto csv_path = std::filesystem::path(out_dir) / "telemetry.csv";
    const auto summary_path = std::filesystem::path(out_dir) / "summary.txt";
    flquad::write_telemetry_csv(result.telemetry, csv_path.string());
    {
        std::ofstream summary(summary_path);
        flquad::write_summary(result, summary);
    }
    flquad::write_summary(result, std::cout);
    std::cout << "telemetry: " << csv_path.string() << '\n';

    if (result.status != flquad::SimStatus::Completed) {
        std::cerr << "simulation aborted: " << result.message << '\n';
        return kExitDomain;
    }
    return kExitOk;
}

int run_verify(int samples, unsigned long seed, const std::string& out_dir)
{
    flquad::VerifyOptions opt;
    opt.samples = samples;
    opt.seed = seed;
    const auto results = flquad::run_verification(opt);

    std::ofstream jsonl;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        jsonl.open(std::filesystem::path(out_dir) / "verification.jsonl");
    }

    bool all_ok = true;
    for (const auto& r : results) {
        const char* status = r.skipped ? "SKIP" : (r.passed ? "PASS" : "FAIL");
        std::cout << status << "  " << r.id << "  " << r.label
                  << "  [" << r.detail << "]\n";
        if (!r.skipped && !r.passed) {
            all_ok = false;
        }
        if (jsonl.is_open()) {
            jsonl << "{\"id\":\"" << r.id << "\",\"status\":\"" << status
                  << "\",\"metric\":" << r.metric
                  << ",\"tolerance\":" << r.tolerance
                  << ",\"detail\":\"" << r.detail << "\"}\n";
        }
    }
    if (!all_ok) {
        std::cerr << "verification failed\n";
        return kExitVerify;
    }
    return kExitOk;
}

int run_trim(double psi)
{
    flquad::VehicleParams p;
    auto [x, u] = flquad::hover_trim(p, flquad::Vec3::Zero(), psi);
    std::cout << "hover trim (psi = " << psi << " rad):\n"
              << "  theta_rad: [" << x.theta.phi << ", " << x.theta.theta
              << ", " << x.theta.psi << "]\n"
              << "  omega_rad_s: [0, 0, 0]\n"
              << "  zeta_m_s2: " << x.zeta << "\n"
              << "  chi_m_s3: " << x.chi << "\n"
              << "  ubar: [" << u.u1_ddot << ", " << u.u2 << ", " << u.u3
              << ", " << u.u4 << "]\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"feedback-linearized quadrotor simulator and verifier"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = ".";
    double dt = -1.0, duration = -1.0, lambda_pos = -1.0, lambda_psi = -1.0;
    auto* sim = app.add_subcommand("simulate", "run a scenario and write telemetry");
    sim->add_option("scenario", scenario_path, "scenario JSON file")->required();
    sim->add_option("--out", out_dir, "output directory");
    sim->add_option("--dt", dt, "integration step override [s]");
    sim->add_option("--duration", duration, "duration override [s]");
    sim->add_option("--lambda-pos", lambda_pos, "position pole override [rad/s]");
    sim->add_option("--lambda-psi", lambda_psi, "heading pole override [rad/s]");

    int samples = 10000;
    unsigned long seed = 12345;
    std::string verify_out;
    auto* ver = app.add_subcommand("verify", "run the model verification ledger");
    ver->add_option("--samples", samples, "sample count for randomized checks");
    ver->add_option("--seed", seed, "RNG seed");
    ver->add_option("--out", verify_out, "directory for the JSONL ledger");

    double psi = 0.0;
    auto* trim = app.add_subcommand("trim", "print the hover trim point");
    trim->add_option("--psi", psi, "heading [rad]");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            return run_simulate(scenario_path, out_dir, dt, duration,
                                lambda_pos, lambda_psi);
        }
        if (ver->parsed()) {
            return run_verify(samples, seed, verify_out);
        }
        return run_trim(psi);
    } catch (const flquad::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const flquad::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
