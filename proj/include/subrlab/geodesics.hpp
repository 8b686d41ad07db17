#pragma once

#include <vector>

#include "subrlab/model_space.hpp"

namespace subrlab {

struct GeodesicSpec {
    Vec4 start = Vec4::Zero();
    Vec3 direction = Vec3(1, 0, 0);  // horizontal unit frame vector
    double lambda = 0.0;
    double s_max = 1.0;
    double step = 1e-3;  // sample spacing
    double s_min = 0.0;  // backward extension, a multiple of step
    int substeps = 1;    // RK4 steps per sample
};

struct GeodesicSample {
    double s;
    Vec4 point;
    Vec3 velocity;
};

struct DriftReport {
    double speed = 0.0;     // max | |gamma'| - 1 |
    double vertical = 0.0;  // max |<gamma', T>|
    double max() const { return speed > vertical ? speed : vertical; }
};

struct GeodesicTrace {
    int kappa = 0;
    double lambda = 0.0;
    double step = 1e-3;
    int substeps = 1;
    std::vector<GeodesicSample> samples;
    DriftReport drift;

    // index of the sample at s = 0
    long origin_index() const;
};

// drift threshold above which integrate_geodesic throws StepTooLarge
inline constexpr double kDriftLimit = 1e-6;

GeodesicTrace integrate_geodesic(const ModelSpace& space, const GeodesicSpec& spec);

// speed and verticality of the sampled positions themselves, by finite differences
DriftReport position_drift(const ModelSpace& space, const GeodesicTrace& trace);

// exact frame velocity of the geodesic of curvature lambda after parameter s
Vec3 geodesic_velocity(const Vec3& w0, double lambda, double s);

// one RK4 step of length h (any sign) from (p, w)
GeodesicSample geodesic_step(const ModelSpace& space, const GeodesicSample& from, double lambda, double h);

struct ProjectionCurvature {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

ProjectionCurvature projection_curvature_stats(const ModelSpace& space, const GeodesicTrace& trace);
double projection_curvature(const ModelSpace& space, const GeodesicTrace& trace);

// Hopf map scaled onto the sphere of radius 1/2
Eigen::Vector3d hopf_half(const Vec4& p);
Eigen::Vector3d hopf_half_push(const Vec4& p, const Vec4& w);

enum class Completeness { injective, closed, undetermined };

struct CompletenessResult {
    Completeness kind = Completeness::undetermined;
    double period = 0.0;
    double min_distance = 0.0;
};

CompletenessResult classify_completeness(const ModelSpace& space, const GeodesicTrace& trace,
                                         double period_tol = 1e-6);

const char* to_string(Completeness c);

}  // namespace subrlab
