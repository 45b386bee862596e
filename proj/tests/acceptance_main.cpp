// Acceptance runner: executes every verification suite in a fixed order and
// prints one PASS/FAIL line per criterion.  Exits nonzero if any fail.

#include <cstdio>
#include <cstring>
#include <string>

#include "sl2r/verify.hpp"

int main(int argc, char** argv) {
    std::string cli_path;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--cli") == 0) cli_path = argv[i + 1];

    const sl2r::verify::VerifyContext ctx{cli_path};
    bool all_pass = true;
    int index = 0;
    for (const auto& name : sl2r::verify::suite_names()) {
        const sl2r::verify::SuiteResult sr = sl2r::verify::run_suite(name, ctx);
        double worst_margin = 0.0;
        const sl2r::verify::CheckResult* worst = nullptr;
        for (const auto& c : sr.checks)
            if (!c.pass && (!worst || c.value > worst_margin)) {
                worst = &c;
                worst_margin = c.value;
            }
        ++index;
        if (sr.pass) {
            std::printf("[PASS] criterion %02d %-22s (%zu checks)\n", index, sr.suite.c_str(),
                        sr.checks.size());
        } else {
            std::printf("[FAIL] criterion %02d %-22s %s: %.6g %s %.6g%s%s\n", index,
                        sr.suite.c_str(), worst->name.c_str(), worst->value,
                        worst->require_above ? "<=" : ">=", worst->tolerance,
                        worst->note.empty() ? "" : " # ", worst->note.c_str());
        }
        all_pass = all_pass && sr.pass;
    }
    std::printf("%s\n", all_pass ? "acceptance: all criteria passed"
                                 : "acceptance: some criteria FAILED");
    return all_pass ? 0 : 1;
}
