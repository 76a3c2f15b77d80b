#include <cstdio>
#include <cstdlib>

#include "ftf/verify.hpp"

// One line per acceptance criterion; exit status 1 if any fails.
int main(int argc, char** argv) {
    ftf::SuiteConfig cfg;
    if (argc > 1) cfg.seed = std::strtoull(argv[1], nullptr, 10);
    bool ok = true;
    ftf::run_acceptance_suite(cfg, [&](const ftf::CheckResult& r) {
        ok = ok && r.pass;
        std::printf("criterion %2d %-42s %s  measured=%.3e  (%.1f s)  %s\n", r.id, r.name.c_str(), r.pass ? "PASS" : "FAIL",
                    r.measured, r.seconds, r.detail.c_str());
        std::fflush(stdout);
    });
    return ok ? 0 : 1;
}
