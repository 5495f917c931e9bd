#include "zlab/config.hpp"

#include "zlab/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace zlab {

namespace {

using nlohmann::json;

const std::vector<std::string> commands = {"simulate", "iterate", "verify", "report"};

// Thresholds each verification reads, in the order they are reported.
const std::map<std::string, std::vector<std::string>>& tolerance_table()
{
    static const std::map<std::string, std::vector<std::string>> table = {
        {"reconstruction", {"lp_residual", "angular_residual"}},
        {"propagators", {"isometry", "energy_drift", "order_low", "order_high"}},
        {"decay", {"exponent_low", "exponent_high", "calibration_low", "calibration_high"}},
        {"strichartz", {"slope", "inhomogeneous_factor", "slope_3d"}},
        {"divcurl", {"growth", "flux_order_low", "flux_order_high"}},
        {"bilinear", {"slope_width"}},
        {"picard", {"ratio", "norm_bound", "mass_drift", "lipschitz", "fit_growth", "floor"}},
        {"iteration3d", {"ratio", "floor"}},
        {"determinism", {}},
        {"bernstein", {"slope"}},
    };
    return table;
}

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw ConfigError(path + ": " + what);
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number())
        fail(path, "expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x))
        fail(path, "expected a finite number");
    return x;
}

long long integer(const json& v, const std::string& path)
{
    if (v.is_number_integer())
        return v.get<long long>();
    double x = number(v, path);
    if (x != std::floor(x) || std::abs(x) > 9e15)
        fail(path, "expected an integer");
    return static_cast<long long>(x);
}

std::string text(const json& v, const std::string& path)
{
    if (!v.is_string())
        fail(path, "expected a string");
    return v.get<std::string>();
}

void require_object(const json& v, const std::string& path)
{
    if (!v.is_object())
        fail(path, "expected an object");
}

void reject_unknown(const json& object, const std::string& prefix, std::initializer_list<const char*> known)
{
    for (const auto& [key, value] : object.items()) {
        bool found = std::any_of(known.begin(), known.end(), [&](const char* k) { return key == k; });
        if (!found)
            fail(prefix + key, "unknown key");
    }
}

void apply_file(RunConfig& c, const json& file)
{
    reject_unknown(file, "",
                   {"command", "estimate", "dim", "grid", "T", "M", "K", "regime", "bands", "ensemble", "kappa",
                    "eps", "out", "timing", "tolerances"});
    if (file.contains("dim"))
        c.dim = static_cast<int>(integer(file["dim"], "dim"));
    if (file.contains("grid")) {
        const json& g = file["grid"];
        require_object(g, "grid");
        reject_unknown(g, "grid.", {"L", "N"});
        if (g.contains("L"))
            c.box = number(g["L"], "grid.L");
        if (g.contains("N"))
            c.grid_n = static_cast<int>(integer(g["N"], "grid.N"));
    }
    if (file.contains("T"))
        c.horizon = number(file["T"], "T");
    if (file.contains("M"))
        c.nodes = static_cast<int>(integer(file["M"], "M"));
    if (file.contains("K"))
        c.iterates = static_cast<int>(integer(file["K"], "K"));
    if (file.contains("regime")) {
        const json& r = file["regime"];
        require_object(r, "regime");
        reject_unknown(r, "regime.", {"s", "l"});
        if (r.contains("s"))
            c.s = number(r["s"], "regime.s");
        if (r.contains("l"))
            c.l = number(r["l"], "regime.l");
    }
    if (file.contains("bands")) {
        const json& b = file["bands"];
        if (!b.is_array())
            fail("bands", "expected a list of numbers");
        c.bands.clear();
        for (std::size_t i = 0; i < b.size(); ++i)
            c.bands.push_back(number(b[i], "bands[" + std::to_string(i) + "]"));
    }
    if (file.contains("ensemble")) {
        const json& e = file["ensemble"];
        require_object(e, "ensemble");
        reject_unknown(e, "ensemble.", {"count", "seed"});
        if (e.contains("count"))
            c.samples = static_cast<int>(integer(e["count"], "ensemble.count"));
        if (e.contains("seed")) {
            long long seed = integer(e["seed"], "ensemble.seed");
            if (seed < 0)
                fail("ensemble.seed", "must be non-negative");
            c.seed = static_cast<std::uint64_t>(seed);
        }
    }
    if (file.contains("kappa"))
        c.kappa = number(file["kappa"], "kappa");
    if (file.contains("eps"))
        c.eps = number(file["eps"], "eps");
    if (file.contains("out"))
        c.out = text(file["out"], "out");
    if (file.contains("timing")) {
        if (!file["timing"].is_boolean())
            fail("timing", "expected true or false");
        c.timing = file["timing"].get<bool>();
    }
    if (file.contains("tolerances")) {
        const json& t = file["tolerances"];
        require_object(t, "tolerances");
        for (const auto& [key, value] : t.items())
            c.tolerances[key] = number(value, "tolerances." + key);
    }
}

void apply_flags(RunConfig& c, const ConfigFlags& f)
{
    if (f.dim)
        c.dim = *f.dim;
    if (f.grid_n)
        c.grid_n = *f.grid_n;
    if (f.box)
        c.box = *f.box;
    if (f.horizon)
        c.horizon = *f.horizon;
    if (f.nodes)
        c.nodes = *f.nodes;
    if (f.iterates)
        c.iterates = *f.iterates;
    if (f.bands)
        c.bands = *f.bands;
    if (f.samples)
        c.samples = *f.samples;
    if (f.seed)
        c.seed = *f.seed;
    if (f.kappa)
        c.kappa = *f.kappa;
    if (f.eps)
        c.eps = *f.eps;
    if (f.out)
        c.out = *f.out;
    if (f.no_timing)
        c.timing = false;
}

void validate(RunConfig& c)
{
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
        fail("command", "unknown command '" + c.command + "'");
    if (c.command == "verify") {
        if (c.estimate.empty())
            fail("estimate", "verify needs an estimate name");
        if (!tolerance_table().contains(c.estimate))
            fail("estimate", "unknown estimate '" + c.estimate + "'");
    }
    if (c.dim < 1 || c.dim > 3)
        fail("dim", "must be 1, 2 or 3");
    if (!(c.box > 0.0) || !std::isfinite(c.box))
        fail("grid.L", "must be positive");
    if (c.grid_n < 8 || (c.grid_n & (c.grid_n - 1)) != 0)
        fail("grid.N", "must be a power of two >= 8");
    if (!(c.horizon > 0.0) || !std::isfinite(c.horizon))
        fail("T", "must be positive");
    if (c.nodes < 1)
        fail("M", "must be >= 1");
    if (c.iterates < 4)
        fail("K", "must be >= 4");
    const bool picard = c.command == "iterate" || c.command == "simulate" || c.estimate == "picard" ||
                        c.estimate == "iteration3d";
    if (picard && c.nodes < 16)
        fail("M", "Picard runs need >= 16 time nodes");
    for (std::size_t i = 0; i < c.bands.size(); ++i)
        if (!is_dyadic(c.bands[i]))
            fail("bands[" + std::to_string(i) + "]", "must be a dyadic number 2^j");
    if (c.samples < 0)
        fail("ensemble.count", "must be non-negative");
    if (!(c.kappa > 0.0))
        fail("kappa", "must be positive");
    if (c.eps < 0.0)
        fail("eps", "must be non-negative");
    if (c.command == "verify") {
        const auto& names = tolerance_names(c.estimate);
        for (const auto& [key, value] : c.tolerances)
            if (std::find(names.begin(), names.end(), key) == names.end())
                fail("tolerances." + key, "unknown key");
    } else if (!c.tolerances.empty()) {
        fail("tolerances." + c.tolerances.begin()->first, "unknown key");
    }
    c.warnings.clear();
    if (c.dim == 2 && c.s != 0.0)
        c.warnings.push_back("off-regime");
}

} // namespace

const std::vector<std::string>& estimate_names()
{
    static const std::vector<std::string> names = {"reconstruction", "propagators", "decay",   "strichartz",
                                                   "divcurl",        "bilinear",    "picard",  "iteration3d",
                                                   "determinism",    "bernstein"};
    return names;
}

const std::vector<std::string>& tolerance_names(const std::string& estimate)
{
    auto it = tolerance_table().find(estimate);
    if (it == tolerance_table().end())
        throw ConfigError("estimate: unknown estimate '" + estimate + "'");
    return it->second;
}

RunConfig default_config(const std::string& command, const std::string& estimate)
{
    constexpr double two_pi = 2 * std::numbers::pi;
    RunConfig c;
    c.command = command;
    if (command == "simulate" || command == "iterate") {
        c.box = 16.0;
        c.grid_n = 128;
        c.horizon = 1.0;
        c.nodes = 64;
        c.iterates = 8;
        c.out = "zlab-" + command;
        return c;
    }
    if (command != "verify")
        return c;

    c.estimate = estimate;
    c.out = "zlab-" + estimate;
    if (estimate == "reconstruction") {
        c.box = two_pi;
        c.grid_n = 256;
        c.samples = 64;
        c.seed = 1;
    } else if (estimate == "propagators") {
        c.box = two_pi;
        c.grid_n = 64;
        c.horizon = 1.0;
        c.nodes = 32;
        c.samples = 8;
        c.seed = 2;
    } else if (estimate == "decay") {
        c.box = 384.0;
        c.grid_n = 1024;
        c.horizon = 8.0;
        c.bands = {1.0};
        c.samples = 0;
    } else if (estimate == "strichartz") {
        c.box = 8.0;
        c.grid_n = 256;
        c.horizon = 0.05;
        c.nodes = 32;
        c.bands = {2, 4, 8, 16, 32};
        c.samples = 32;
        c.seed = 7;
    } else if (estimate == "divcurl") {
        c.box = 8.0;
        c.grid_n = 64;
        c.horizon = 0.05;
        c.nodes = 24;
        c.bands = {8, 16, 32};
        c.samples = 32;
        c.seed = 11;
    } else if (estimate == "bilinear") {
        c.box = 8.0;
        c.nodes = 24;
        c.bands = {16, 32, 64, 128};
        c.samples = 32;
        c.seed = 5;
    } else if (estimate == "picard") {
        c.box = 16.0;
        c.grid_n = 128;
        c.horizon = 16.0;
        c.nodes = 64;
        c.iterates = 8;
        c.samples = 8;
        c.seed = 3;
    } else if (estimate == "iteration3d") {
        c.dim = 3;
        c.box = 16.0;
        c.grid_n = 32;
        c.horizon = 16.0;
        c.nodes = 32;
        c.iterates = 5;
        c.s = 0.1;
        c.l = -0.4;
        c.samples = 0;
        c.seed = 3;
    } else if (estimate == "determinism") {
        c.box = two_pi;
        c.grid_n = 64;
        c.samples = 8;
        c.seed = 1;
    } else if (estimate == "bernstein") {
        c.box = 8.0;
        c.grid_n = 512;
        c.bands = {2, 4, 8, 16, 32, 64};
        c.samples = 32;
        c.seed = 3;
    }
    return c;
}

nlohmann::json RunConfig::to_json() const
{
    json j;
    j["command"] = command;
    if (!estimate.empty())
        j["estimate"] = estimate;
    j["dim"] = dim;
    j["grid"] = {{"L", box}, {"N", grid_n}};
    j["T"] = horizon;
    j["M"] = nodes;
    j["K"] = iterates;
    j["regime"] = {{"s", s}, {"l", l}};
    j["bands"] = bands;
    j["ensemble"] = {{"count", samples}, {"seed", seed}};
    j["kappa"] = kappa;
    j["eps"] = eps;
    j["out"] = out;
    j["timing"] = timing;
    j["tolerances"] = json::object();
    for (const auto& [k, v] : tolerances)
        j["tolerances"][k] = v;
    if (!warnings.empty())
        j["warnings"] = warnings;
    return j;
}

double RunConfig::tolerance(const std::string& name, double pinned) const
{
    auto it = tolerances.find(name);
    return it == tolerances.end() ? pinned : it->second;
}

RunConfig parse_config(const nlohmann::json& file, const ConfigFlags& flags)
{
    if (!file.is_null())
        require_object(file, "<root>");
    auto pick = [&](const char* key, const std::optional<std::string>& flag, std::string fallback) {
        if (flag)
            return *flag;
        if (!file.is_null() && file.contains(key))
            return text(file[key], key);
        return fallback;
    };
    std::string command = pick("command", flags.command, "verify");
    std::string estimate = pick("estimate", flags.estimate, "");
    if (command == "verify" && !estimate.empty() && !tolerance_table().contains(estimate))
        fail("estimate", "unknown estimate '" + estimate + "'");

    RunConfig c = default_config(command, estimate);
    if (!file.is_null())
        apply_file(c, file);
    apply_flags(c, flags);
    c.command = command;
    c.estimate = command == "verify" ? estimate : "";
    validate(c);
    return c;
}

RunConfig parse_config_file(const std::filesystem::path& path, const ConfigFlags& flags)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path.string() + ": cannot open config file");
    json file;
    try {
        file = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(file, flags);
}

} // namespace zlab
