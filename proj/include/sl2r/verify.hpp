#ifndef SL2R_VERIFY_HPP
#define SL2R_VERIFY_HPP

#include <string>
#include <vector>

// Named property suites backing `sl2rlab verify` and the acceptance runner.
// Each check reports the measured quantity, the bound it is held to, and
// whether it passed; suites never throw on a failed bound, only on misuse.

namespace sl2r::verify {

struct CheckResult {
    std::string name;
    double value = 0.0;      // measured residual / deviation / count
    double tolerance = 0.0;  // bound the value is compared against
    bool require_above = false;  // true: pass iff value > tolerance
    bool pass = false;
    std::string note;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    bool pass = true;
};

struct VerifyContext {
    std::string cli_path;  // needed by the "formats" suite to respawn the CLI
};

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const VerifyContext& ctx = {});
std::vector<SuiteResult> run_all_suites(const VerifyContext& ctx = {});

}  // namespace sl2r::verify

#endif
