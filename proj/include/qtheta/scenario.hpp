#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qtheta {

struct CheckOutcome {
    std::string name;
    nlohmann::json params;
    double residual = 0;
    double tail_bound = 0;
    double tolerance = 0;
    bool pass = false;
    double wall_ms = 0;
    std::string error;  // nonempty if the check threw
};

struct Report {
    int schema_version = 1;
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<CheckOutcome> checks;
    bool all_pass = false;
};

/// Runs every check named in the scenario JSON. Unknown check names or
/// schema violations throw std::invalid_argument (CLI exit code 2); a
/// failing check only clears all_pass (CLI exit code 1).
Report run_scenario(const nlohmann::json& scenario);

/// Deterministic JSON rendering of a report; wall times only on request so
/// the default output is byte-identical for a fixed seed and config.
nlohmann::json report_to_json(const Report& r, bool include_timings = false);

std::vector<std::string> available_checks();

}  // namespace qtheta
