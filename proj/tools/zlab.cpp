// zlab: command-line front end of the harness.
//
//   zlab simulate|iterate [flags]
//   zlab verify <name> [flags]
//   zlab report [--out DIR]
//
// Exit codes: 0 pass, 1 check failed, 2 usage or config error, 3 divergence.

#include "zlab/acceptance.hpp"
#include "zlab/config.hpp"
#include "zlab/report.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <string>

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;
constexpr int exit_divergence = 3;

std::string bounds(double lower, double upper)
{
    using zlab::format_number;
    if (std::isfinite(lower) && std::isfinite(upper))
        return lower == upper ? "== " + format_number(lower)
                              : "in [" + format_number(lower) + ", " + format_number(upper) + "]";
    if (std::isfinite(upper))
        return "<= " + format_number(upper);
    if (std::isfinite(lower))
        return ">= " + format_number(lower);
    return "";
}

void print_checks(const std::string& name, const zlab::VerifyResult& r)
{
    for (const auto& c : r.checks) {
        std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.label << " = " << zlab::format_number(c.value) << "  ("
                  << bounds(c.lower, c.upper) << ")";
        if (!c.note.empty())
            std::cout << "  [" << c.note << "]";
        std::cout << "\n";
    }
    std::cout << name << ": " << (r.diverged ? "DIVERGED" : r.pass ? "PASS" : "FAIL") << "\n";
}

// Prints the checks of an emitted summary.json.
int report(const std::string& dir)
{
    nlohmann::json j;
    std::string path = dir + "/summary.json";
    try {
        j = nlohmann::json::parse(zlab::read_text_file(path));
    } catch (const std::exception& e) {
        std::cerr << "zlab report: " << e.what() << "\n";
        return exit_usage;
    }
    if (!j.contains("summary")) {
        std::cout << path << ": no results\n";
        return exit_pass;
    }
    const auto& s = j["summary"];
    for (const auto& c : s["checks"]) {
        double lower = c.contains("lower") ? c["lower"].get<double>() : -zlab::infinity;
        double upper = c.contains("upper") ? c["upper"].get<double>() : zlab::infinity;
        double value = c["value"].is_number() ? c["value"].get<double>() : std::numeric_limits<double>::quiet_NaN();
        std::cout << (c["pass"].get<bool>() ? "PASS  " : "FAIL  ") << c["label"].get<std::string>() << " = "
                  << zlab::format_number(value) << "  (" << bounds(lower, upper) << ")\n";
    }
    bool diverged = s.value("diverged", false);
    bool pass = s.value("pass", false);
    std::cout << s.value("name", std::string("run")) << ": " << (diverged ? "DIVERGED" : pass ? "PASS" : "FAIL")
              << "\n";
    return diverged ? exit_divergence : pass ? exit_pass : exit_fail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical verification harness for the reduced Zakharov system"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    zlab::ConfigFlags flags;
    int dim = 0, grid_n = 0, nodes = 0, samples = 0, iterates = 0;
    double box = 0, horizon = 0, kappa = 0, eps = 0;
    std::vector<double> bands;
    std::uint64_t seed = 0;
    std::string out;

    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    auto* o_dim = app.add_option("--dim", dim, "spatial dimension (1, 2, 3)");
    auto* o_n = app.add_option("--grid-n", grid_n, "points per axis, a power of two");
    auto* o_box = app.add_option("--box", box, "box side L");
    auto* o_T = app.add_option("--T", horizon, "time horizon");
    auto* o_M = app.add_option("--nodes", nodes, "time nodes M");
    auto* o_K = app.add_option("--iterates", iterates, "Picard iterates K");
    auto* o_bands = app.add_option("--bands", bands, "dyadic bands, comma separated")->delimiter(',');
    auto* o_samples = app.add_option("--samples", samples, "ensemble size");
    auto* o_seed = app.add_option("--seed", seed, "ensemble seed");
    auto* o_kappa = app.add_option("--kappa", kappa, "cone constant");
    auto* o_eps = app.add_option("--eps", eps, "d = 3 Strichartz loss exponent");
    auto* o_out = app.add_option("--out", out, "output directory");
    app.add_flag("--no-timing", flags.no_timing, "omit wall-clock fields from summary.json");

    auto* simulate = app.add_subcommand("simulate", "Picard solution with per-node diagnostics");
    auto* iterate = app.add_subcommand("iterate", "Picard iteration with per-iterate norms");
    auto* verify = app.add_subcommand("verify", "run a named verification");
    std::string estimate;
    verify->add_option("name", estimate, "verification name")
        ->required()
        ->check(CLI::IsMember(zlab::estimate_names()));
    auto* report_cmd = app.add_subcommand("report", "print the checks of an emitted summary.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    if (o_dim->count())
        flags.dim = dim;
    if (o_n->count())
        flags.grid_n = grid_n;
    if (o_box->count())
        flags.box = box;
    if (o_T->count())
        flags.horizon = horizon;
    if (o_M->count())
        flags.nodes = nodes;
    if (o_K->count())
        flags.iterates = iterates;
    if (o_bands->count())
        flags.bands = bands;
    if (o_samples->count())
        flags.samples = samples;
    if (o_seed->count())
        flags.seed = seed;
    if (o_kappa->count())
        flags.kappa = kappa;
    if (o_eps->count())
        flags.eps = eps;
    if (o_out->count())
        flags.out = out;

    std::string command = simulate->parsed() ? "simulate"
                          : iterate->parsed() ? "iterate"
                          : verify->parsed()  ? "verify"
                                              : "report";
    flags.command = command;
    if (verify->parsed())
        flags.estimate = estimate;

    zlab::RunConfig config;
    try {
        config = config_path.empty() ? zlab::parse_config(nlohmann::json(), flags)
                                     : zlab::parse_config_file(config_path, flags);
    } catch (const zlab::ConfigError& e) {
        std::cerr << "zlab: config error: " << e.what() << "\n";
        return exit_usage;
    }
    for (const auto& w : config.warnings)
        std::cerr << "zlab: warning: " << w << " (d = 2 with s = " << config.s << ")\n";

    if (report_cmd->parsed())
        return report(config.out);

    const auto start = std::chrono::steady_clock::now();
    zlab::VerifyResult result;
    try {
        result = zlab::run_command(config);
    } catch (const zlab::DivergenceError& e) {
        std::cerr << "zlab: divergence at iterate " << e.iterate << ": " << e.what() << "\n";
        return exit_divergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "zlab: invalid input: " << e.what() << "\n";
        return exit_usage;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    try {
        zlab::emit_reports(zlab::make_report(config, result, seconds), config.out, config.timing);
    } catch (const std::exception& e) {
        std::cerr << "zlab: " << e.what() << "\n";
        return exit_usage;
    }
    std::string name = command == "verify" ? "verify " + config.estimate : command;
    print_checks(name, result);
    if (config.timing)
        std::printf("wall time %.1f s, reports in %s\n", seconds, config.out.c_str());
    return result.diverged ? exit_divergence : result.pass ? exit_pass : exit_fail;
}
