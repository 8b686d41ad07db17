// One line per acceptance criterion; exit status is nonzero if any criterion fails.
#include <cstdio>
#include <map>
#include <string>

#include "subrlab/verify.hpp"

namespace {

struct Criterion {
    const char* title;
    double budget_s;  // runtime budget, 0 when none is set
};

const std::map<int, Criterion> kCriteria = {
    {1, {"frame brackets", 1.0}},
    {2, {"curvature and Ricci", 1.0}},
    {3, {"geodesic conservation, helix, projection curvature", 10.0}},
    {4, {"Jacobi closed forms, conserved quantity, family oracle", 10.0}},
    {5, {"surface identities", 60.0}},
    {6, {"L(|N_h|) cross-check and discriminant", 0.0}},
    {7, {"second variation vs finite differences", 120.0}},
    {8, {"instability certificates", 120.0}},
    {9, {"integration by parts", 0.0}},
};

}  // namespace

int main() {
    subrlab::VerifyOptions opts;
    opts.helix_fixture = std::string(SUBRLAB_SOURCE_DIR) + "/tests/fixtures/helix_m0.json";
    const auto results = subrlab::run_verify("all", opts);

    struct Tally {
        int checks = 0, failed = 0;
        double seconds = 0.0;
        std::string worst;
    };
    std::map<int, Tally> tally;
    for (const auto& r : results) {
        if (r.criterion == 0) continue;
        auto& t = tally[r.criterion];
        ++t.checks;
        t.seconds += r.seconds;
        if (!r.pass) {
            ++t.failed;
            char buf[256];
            std::snprintf(buf, sizeof buf, " %s=%.3e>%.3e", r.name.c_str(), r.residual, r.tolerance);
            t.worst += buf;
        }
    }

    int failed = 0;
    for (const auto& [n, c] : kCriteria) {
        const auto& t = tally[n];
        const bool slow = c.budget_s > 0.0 && t.seconds > c.budget_s;
        const bool ok = t.checks > 0 && t.failed == 0 && !slow;
        failed += ok ? 0 : 1;
        std::printf("AC%d %s  %-55s %2d checks  %7.2fs%s%s\n", n, ok ? "PASS" : "FAIL", c.title, t.checks, t.seconds,
                    slow ? "  over budget" : "", t.worst.c_str());
    }
    return failed ? 1 : 0;
}
