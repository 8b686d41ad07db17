#pragma once

#include <stdexcept>
#include <string>

namespace subrlab {

struct ChartDomainViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ChartExit : std::runtime_error {
    double s_exit;
    ChartExit(const std::string& what, double s) : std::runtime_error(what), s_exit(s) {}
};

struct StepTooLarge : std::runtime_error {
    double drift;
    StepTooLarge(const std::string& what, double d) : std::runtime_error(what), drift(d) {}
};

struct DegenerateProjection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MisalignedBase : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateImmersion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// node is the flat grid index of the first offending node
struct SingularPoint : std::runtime_error {
    long node;
    SingularPoint(const std::string& what, long n) : std::runtime_error(what), node(n) {}
};

struct SingularAfterDisplacement : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WrongBranch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace subrlab
