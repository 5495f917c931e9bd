#pragma once

#include "zlab/config.hpp"
#include "zlab/picard.hpp"
#include "zlab/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zlab {

// One documented threshold: passes when lower <= value <= upper.
struct Check {
    std::string label;
    double value = 0.0;
    double lower = -infinity;
    double upper = infinity;
    bool pass = false;
    std::string note; // e.g. why a value was accepted by a fallback rule
};

Check make_check(std::string label, double value, double lower, double upper);

struct VerifyResult {
    std::string name;
    bool pass = true;
    bool diverged = false;
    std::vector<Check> checks;
    nlohmann::json metrics = nlohmann::json::object();
    std::vector<Table> tables;
    std::vector<Table> plots;

    void add(Check c);
};

// Seeded small data on a grid: E0 of L^2 norm `size` and (n0, n1) scaled
// so that ||v0||_{H^l} = size, all with spectrum in |xi| <= 2.
ZakharovData seeded_data(const Grid& grid, double l, std::uint64_t seed, double size = 0.1);

// `verify <name>` with the thresholds of the estimate, overridable through
// config.tolerances.
VerifyResult run_verify(const RunConfig& config);
// Picard run on seeded data at the configured horizon; per-iterate table.
VerifyResult run_iterate(const RunConfig& config);
// As run_iterate, plus per-node diagnostics of the last iterate.
VerifyResult run_simulate(const RunConfig& config);
// Dispatch on config.command (not "report").
VerifyResult run_command(const RunConfig& config);

ReportDocument make_report(const RunConfig& config, const VerifyResult& result,
                           std::optional<double> wall_seconds = std::nullopt);

// Acceptance criteria 1..9 by number.
std::string criterion_estimate(int id);
RunConfig criterion_config(int id);

} // namespace zlab
