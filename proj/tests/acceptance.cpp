// Acceptance suite: one PASS/FAIL line per criterion, thresholds pinned in
// the acceptance library. Usage: acceptance [--out DIR] [id ...]
// Reports of each criterion land in DIR/<name>.

#include "zlab/acceptance.hpp"
#include "zlab/report.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    std::string out = "acceptance-out";
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--out" && i + 1 < argc) {
            out = argv[++i];
        } else {
            int id = std::atoi(a.c_str());
            if (id < 1 || id > 9) {
                std::fprintf(stderr, "usage: acceptance [--out DIR] [1..9 ...]\n");
                return 2;
            }
            ids.push_back(id);
        }
    }
    if (ids.empty())
        for (int id = 1; id <= 9; ++id)
            ids.push_back(id);

    int failed = 0;
    for (int id : ids) {
        zlab::RunConfig config = zlab::criterion_config(id);
        config.out = out + "/" + config.estimate;
        const auto start = std::chrono::steady_clock::now();
        zlab::VerifyResult r;
        std::string error;
        try {
            r = zlab::run_verify(config);
            zlab::emit_reports(zlab::make_report(config, r), config.out, false);
        } catch (const std::exception& e) {
            r.pass = false;
            error = e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        int passed = 0;
        for (const auto& c : r.checks)
            passed += c.pass;
        std::printf("criterion %d %-15s %s  (%d/%zu checks, %.1f s)\n", id, config.estimate.c_str(),
                    r.pass ? "PASS" : "FAIL", passed, r.checks.size(), seconds);
        for (const auto& c : r.checks)
            if (!c.pass)
                std::printf("    failed: %s = %s\n", c.label.c_str(), zlab::format_number(c.value).c_str());
        if (!error.empty())
            std::printf("    error: %s\n", error.c_str());
        std::fflush(stdout);
        failed += !r.pass;
    }
    return failed == 0 ? 0 : 1;
}
