// acceptance.cpp — one PASS/FAIL line per acceptance criterion

#include "vnalg/suites.hpp"

#include <cstdio>
#include <cstring>

int main(int argc, char** argv) {
    using namespace vnalg::suites;
    options opt;
    opt.data_dir = VNALG_DATA_DIR;
    const bool verbose = argc > 1 && std::strcmp(argv[1], "-v") == 0;
    int unexpected = 0, criterion = 0;
    for (const auto& name : suite_names()) {
        ++criterion;
        const suite_result r = run_suite(name, opt);
        std::printf("%s criterion %d: %s (%d/%zu checks, %.1f s)\n", r.pass() ? "PASS" : "FAIL", criterion,
                    r.title.c_str(), r.passed(), r.checks.size(), r.seconds);
        for (const auto& c : r.checks) {
            if (!c.pass && !c.known_red) ++unexpected;
            if (!c.pass || verbose)
                std::printf("    %s %s: %.3g (threshold %.3g) %s%s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(), c.value,
                            c.threshold, c.detail.c_str(), c.known_red ? " [known red]" : "");
        }
        if (r.seconds > 60) {
            std::printf("    FAIL time budget: %.1f s > 60 s\n", r.seconds);
            ++unexpected;
        }
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
