#pragma once

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zlab {

// Schema violations; the message starts with the offending key path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One run of the harness. File schema (all keys optional):
//   command     "simulate" | "iterate" | "verify" | "report"
//   estimate    verification name, required for verify
//   dim         1, 2 or 3
//   grid        { "L": box side, "N": points per axis, a power of two }
//   T, M        horizon and time nodes
//   K           Picard iterates
//   regime      { "s": ..., "l": ... }
//   bands       list of dyadic bands
//   ensemble    { "count": ..., "seed": ... }
//   kappa, eps  cone constant, d = 3 Strichartz loss
//   out         output directory
//   timing      false drops wall-clock fields from summary.json
//   tolerances  { name: value } overrides of the estimate's thresholds
struct RunConfig {
    std::string command = "verify";
    std::string estimate;
    int dim = 2;
    double box = 16.0;
    int grid_n = 128;
    double horizon = 1.0;
    int nodes = 64;
    int iterates = 8;
    double s = 0.0;
    double l = -0.5;
    std::vector<double> bands;
    int samples = 32;
    std::uint64_t seed = 1;
    double kappa = 2.0;
    double eps = 0.05;
    std::string out = "zlab-out";
    bool timing = true;
    std::map<std::string, double> tolerances;
    std::vector<std::string> warnings; // e.g. "off-regime"

    nlohmann::json to_json() const;
    // Threshold `name`: the override if present, else `pinned`.
    double tolerance(const std::string& name, double pinned) const;
};

// Command-line values; set fields win over the file.
struct ConfigFlags {
    std::optional<std::string> command, estimate;
    std::optional<int> dim, grid_n, nodes, samples, iterates;
    std::optional<double> box, horizon, kappa, eps;
    std::optional<std::vector<double>> bands;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool no_timing = false;
};

// Verification names accepted by `verify`.
const std::vector<std::string>& estimate_names();
// Tolerance names an estimate reads; overrides outside this list are rejected.
const std::vector<std::string>& tolerance_names(const std::string& estimate);

// Documented defaults of a command (and estimate for verify).
RunConfig default_config(const std::string& command, const std::string& estimate = {});

RunConfig parse_config(const nlohmann::json& file, const ConfigFlags& flags);
// Reads and parses `path`; a missing or malformed file is a ConfigError.
RunConfig parse_config_file(const std::filesystem::path& path, const ConfigFlags& flags);

} // namespace zlab
