#include "flquad/scenario_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace flquad {

namespace {

using nlohmann::json;

Vec3 to_vec3(const json& j, const char* key)
{
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError(std::string("expected 3-element array for ") + key);
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

VehicleParams parse_vehicle(const json& j)
{
    VehicleParams p;
    if (j.contains("J_diag_kg_m2")) {
        p.J = to_vec3(j["J_diag_kg_m2"], "J_diag_kg_m2").asDiagonal();
    } else if (j.contains("J_kg_m2")) {
        const auto& rows = j["J_kg_m2"];
        if (!rows.is_array() || rows.size() != 3) {
            throw ConfigError("J_kg_m2 must be a 3x3 array");
        }
        for (int r = 0; r < 3; ++r) {
            p.J.row(r) = to_vec3(rows[static_cast<size_t>(r)], "J_kg_m2 row").transpose();
        }
    }
    p.g_mag = j.value("g_m_s2", p.g_mag);
    p.zeta_min = j.value("zeta_min_m_s2", p.zeta_min);
    p.u1_ddot_max = j.value("u1_ddot_max_m_s4", p.u1_ddot_max);
    p.torque_max = j.value("torque_max_rad_s2", p.torque_max);
    return p;
}

SignalSpec parse_signal(const json& j)
{
    SignalSpec s;
    const std::string type = j.value("type", "zero");
    if (type == "zero") {
        s.kind = SignalSpec::Kind::Zero;
    } else if (type == "constant") {
        s.kind = SignalSpec::Kind::Constant;
        s.amplitude = j.value("value", 0.0);
    } else if (type == "sinusoid") {
        s.kind = SignalSpec::Kind::Sinusoid;
        s.amplitude = j.value("amplitude", 0.0);
        s.freq = j.value("freq_rad_s", 0.0);
        s.phase = j.value("phase_rad", 0.0);
    } else {
        throw ConfigError("unknown disturbance signal type: " + type);
    }
    return s;
}

ReferenceSpec parse_reference(const json& j)
{
    const std::string type = j.value("type", "hover");
    if (type == "hover") {
        HoverRef h;
        if (j.contains("r_m")) h.r0 = to_vec3(j["r_m"], "r_m");
        h.psi0 = j.value("psi_rad", 0.0);
        return h;
    }
    if (type == "circle") {
        CircleRef c;
        if (j.contains("center_m")) c.center = to_vec3(j["center_m"], "center_m");
        c.radius = j.value("radius_m", c.radius);
        c.rate = j.value("rate_rad_s", c.rate);
        c.psi0 = j.value("psi_rad", 0.0);
        return c;
    }
    if (type == "waypoints") {
        WaypointRef w;
        if (j.contains("waypoints_m")) {
            for (const auto& wp : j["waypoints_m"]) {
                w.waypoints.push_back(to_vec3(wp, "waypoints_m entry"));
            }
        }
        if (j.contains("headings_rad")) {
            w.headings = j["headings_rad"].get<std::vector<double>>();
        } else {
            w.headings.assign(w.waypoints.size(), 0.0);
        }
        w.segment_duration = j.value("segment_duration_s", w.segment_duration);
        return w;
    }
    throw ConfigError("unknown reference type: " + type);
}

InitialSpec parse_initial(const json& j)
{
    InitialSpec init;
    const std::string type = j.value("type", "from_reference");
    if (type == "from_reference") {
        init.kind = InitialSpec::Kind::FromReference;
    } else if (type == "hover") {
        init.kind = InitialSpec::Kind::Hover;
        if (j.contains("r_m")) init.r0 = to_vec3(j["r_m"], "r_m");
        init.psi0 = j.value("psi_rad", 0.0);
    } else if (type == "state") {
        init.kind = InitialSpec::Kind::State;
        ExtendedState x;
        if (j.contains("r_m")) x.r = to_vec3(j["r_m"], "r_m");
        if (j.contains("v_m_s")) x.v = to_vec3(j["v_m_s"], "v_m_s");
        if (j.contains("theta_rad")) {
            const Vec3 th = to_vec3(j["theta_rad"], "theta_rad");
            x.theta = {th.x(), th.y(), th.z()};
        }
        if (j.contains("omega_rad_s")) x.omega_b = to_vec3(j["omega_rad_s"], "omega_rad_s");
        x.zeta = j.value("zeta_m_s2", 9.81);
        x.chi = j.value("chi_m_s3", 0.0);
        init.state = x;
    } else {
        throw ConfigError("unknown initial state type: " + type);
    }
    return init;
}

}  // namespace

Scenario scenario_from_json(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario parse error: ") + e.what());
    }

    try {
        Scenario sc;
        sc.duration = j.value("duration_s", sc.duration);
        sc.step = j.value("step_s", sc.step);
        if (j.contains("vehicle")) sc.params = parse_vehicle(j["vehicle"]);
        if (j.contains("reference")) sc.ref = parse_reference(j["reference"]);
        if (j.contains("initial")) sc.initial = parse_initial(j["initial"]);
        if (j.contains("gains")) {
            const auto& g = j["gains"];
            sc.gains = GainSet::make(g.value("lambda_pos_rad_s", 2.0),
                                     g.value("lambda_psi_rad_s", 3.0));
        }
        if (j.contains("margins")) {
            sc.margins.tilt_margin = j["margins"].value("tilt_margin_rad",
                                                        sc.margins.tilt_margin);
        }
        sc.margins.zeta_min = sc.params.zeta_min;
        if (j.contains("disturbance")) {
            const auto& d = j["disturbance"];
            if (d.contains("d_rad_s2")) {
                for (size_t i = 0; i < 3; ++i) {
                    sc.disturbance.d[i] = parse_signal(d["d_rad_s2"].at(i));
                }
            }
            if (d.contains("a_d_m_s2")) {
                for (size_t i = 0; i < 3; ++i) {
                    sc.disturbance.a_d[i] = parse_signal(d["a_d_m_s2"].at(i));
                }
            }
        }
        return sc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario schema error: ") + e.what());
    }
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

namespace {

constexpr const char* kTelemetryVersion = "# flquad_telemetry v1";

constexpr const char* kHeader =
    "t,"
    "r_x,r_y,r_z,v_x,v_y,v_z,phi,theta,psi,omega_x,omega_y,omega_z,zeta,chi,"
    "zr_x,zr_y,zr_z,zv_x,zv_y,zv_z,za_x,za_y,za_z,zs_x,zs_y,zs_z,z_psi,z_eta,"
    "u1_ddot,u2,u3,u4,"
    "vr_x,vr_y,vr_z,v_psi,"
    "ref_r_x,ref_r_y,ref_r_z,ref_v_x,ref_v_y,ref_v_z,"
    "ref_a_x,ref_a_y,ref_a_z,ref_s_x,ref_s_y,ref_s_z,"
    "ref_r4_x,ref_r4_y,ref_r4_z,ref_psi,ref_psi_dot,ref_psi_ddot,"
    "in_domain,cond_E,"
    "res_snap_x,res_snap_y,res_snap_z,res_psi_ddot";

void put(std::ostream& os, double v, bool last = false)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
    if (!last) os << ',';
}

}  // namespace

Eigen::MatrixXd telemetry_matrix(const Telemetry& telemetry)
{
    const auto n = static_cast<Eigen::Index>(telemetry.rows.size());
    Eigen::MatrixXd m(n, 61);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = telemetry.rows[static_cast<size_t>(r)];
        Eigen::Index c = 0;
        m(r, c++) = row.t;
        m.row(r).segment<14>(c) = row.x.to_vector();
        c += 14;
        m.row(r).segment<14>(c) = row.z.to_vector();
        c += 14;
        m.row(r).segment<4>(c) = row.u.to_vector();
        c += 4;
        m.row(r).segment<4>(c) = row.v.to_vector();
        c += 4;
        m.row(r).segment<3>(c) = row.ref.r; c += 3;
        m.row(r).segment<3>(c) = row.ref.v; c += 3;
        m.row(r).segment<3>(c) = row.ref.a; c += 3;
        m.row(r).segment<3>(c) = row.ref.s; c += 3;
        m.row(r).segment<3>(c) = row.ref.r4; c += 3;
        m(r, c++) = row.ref.psi;
        m(r, c++) = row.ref.psi_dot;
        m(r, c++) = row.ref.psi_ddot;
        m(r, c++) = row.in_domain ? 1.0 : 0.0;
        m(r, c++) = row.cond_E;
        m.row(r).segment<3>(c) = row.snap_residual; c += 3;
        m(r, c++) = row.psi_ddot_residual;
    }
    return m;
}

const std::vector<std::string>& telemetry_columns()
{
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> v;
        std::stringstream ss(kHeader);
        std::string name;
        while (std::getline(ss, name, ',')) {
            v.push_back(name);
        }
        return v;
    }();
    return cols;
}

void write_telemetry_csv(const Telemetry& telemetry, std::ostream& os)
{
    os << kTelemetryVersion << '\n' << kHeader << '\n';
    const Eigen::MatrixXd m = telemetry_matrix(telemetry);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            put(os, m(r, c), c == m.cols() - 1);
        }
        os << '\n';
    }
}

void write_telemetry_csv(const Telemetry& telemetry, const std::string& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open telemetry output file: " + path);
    }
    write_telemetry_csv(telemetry, out);
}

void write_summary(const SimResult& result, std::ostream& os)
{
    const char* status = result.status == SimStatus::Completed ? "completed"
                       : result.status == SimStatus::DomainExit ? "domain-exit"
                                                                : "non-finite";
    os << "status: " << status << '\n';
    if (!result.message.empty()) {
        os << "diagnostic: " << result.message << '\n';
    }
    os << "t_end_s: " << result.t_end << '\n';
    os << "steps: " << result.telemetry.rows.size() << '\n';

    double max_err = 0.0, final_err = 0.0, max_cond = 0.0;
    int violations = 0;
    for (const auto& row : result.telemetry.rows) {
        const double e = (row.x.r - row.ref.r).norm();
        max_err = std::max(max_err, e);
        final_err = e;
        max_cond = std::max(max_cond, row.cond_E);
        if (!row.in_domain) ++violations;
    }
    os << "max_position_error_m: " << max_err << '\n';
    os << "final_position_error_m: " << final_err << '\n';
    os << "max_cond_E: " << max_cond << '\n';
    os << "domain_violations: " << violations << '\n';
    os << "saturation_warnings: " << result.saturation_warnings << '\n';
}

}  // namespace flquad
