#pragma once

#include <map>
#include <string>
#include <vector>

namespace subrlab {

struct CheckResult {
    std::string suite;
    std::string name;
    int criterion = 0;  // acceptance criterion the check belongs to, 0 if none
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double seconds = 0.0;
};

struct VerifyOptions {
    unsigned long seed = 42;
    double tol_scale = 1.0;
    std::string helix_fixture;  // optional JSON with symbolic helix endpoints
};

struct Tolerance {
    double base = 0.0;
    double floor = 0.0;  // --tol-scale never goes below this
    bool fixed = false;  // structural checks (ratios, flags) are not scaled
};

const std::map<std::string, Tolerance>& tolerance_table();

const std::vector<std::string>& suite_names();

// suite is one of suite_names() or "all"; output order is fixed by the registry
std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opts);

}  // namespace subrlab
