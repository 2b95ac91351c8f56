#pragma once

#include "flquad/simulator.hpp"

#include <iosfwd>
#include <string>

namespace flquad {

// Raised for unreadable or malformed scenario files (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario configuration, JSON with unit-suffixed keys. Every field is
// optional and defaults to the hover scenario; see scenarios/ for the
// documented schema.
Scenario load_scenario(const std::string& path);
Scenario scenario_from_json(const std::string& json_text);

// Telemetry CSV: versioned comment line, fixed header row, 17
// significant digits. Byte-identical for identical scenarios.
void write_telemetry_csv(const Telemetry& telemetry, std::ostream& os);
void write_telemetry_csv(const Telemetry& telemetry, const std::string& path);

// Human-readable run summary (final tracking error, condition number
// peak, domain/saturation diagnostics).
void write_summary(const SimResult& result, std::ostream& os);

// Telemetry flattened to a rows x 61 matrix (the CSV layout) and the
// matching column names.
Eigen::MatrixXd telemetry_matrix(const Telemetry& telemetry);
const std::vector<std::string>& telemetry_columns();

}  // namespace flquad
