#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "subrlab/stability.hpp"

namespace subrlab {

inline constexpr const char* kScenarioSchema = "subrlab.scenario/1";

enum class Generator { geodesic, jacobi, vertical_cylinder, ruled_surface, stability_sweep };
const char* to_string(Generator g);

struct Scenario {
    std::string name;
    int kappa = 0;
    Generator generator = Generator::geodesic;
    nlohmann::json params;
    long seed = 0;
};

// Validates the whole document, including generator parameters; throws ValidationError.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

// fiber through base with direction angle angle0 + twist * eps
AlphaCurve fiber_alpha(const ModelSpace& space, const Vec4& base, double angle0, double twist);

GeodesicSpec geodesic_spec_from(const ModelSpace& space, const nlohmann::json& p);

// surface generators; H overrides the scenario value when given (used by sweeps)
SurfacePatch build_patch(const Scenario& sc, const double* H = nullptr);

CertificateOptions certificate_options(const Scenario& sc);

// bump normal speed for the second-variation check; empty json gives a centred default
std::vector<double> variation_bump(const SurfacePatch& patch, const nlohmann::json& spec);

nlohmann::json report_to_json(const StabilityReport& r);

void write_trace_csv(std::ostream& os, const GeodesicTrace& trace);
nlohmann::json trace_to_json(const GeodesicTrace& trace);
void write_jacobi_csv(std::ostream& os, const JacobiTrace& jt, const VerticalClosedForm& cf);
void write_patch_csv(std::ostream& os, const SurfacePatch& patch, const SurfaceFields& fields);

}  // namespace subrlab
