#pragma once

#include <vector>

#include "subrlab/geodesics.hpp"
#include "subrlab/jacobi.hpp"

namespace subrlab {

// Rectangular patch F(eps, s). Rows are eps, columns are s; node (i, j) is i * ns + j.
// Every row is a CC-geodesic parameterized by s, so Z = dF/ds at regular nodes.
struct SurfacePatch {
    ModelSpace space{0};
    std::vector<double> eps;
    std::vector<double> s;
    bool closed_s = false;  // s periodic with period ns * s_step
    double H_target = 0.0;
    bool eps_reversed = false;  // orientation flipped eps -> -eps; user windows refer to the unflipped axis
    std::vector<Vec4> points;
    std::vector<Vec3> V_field;   // dF/deps in frame components
    std::vector<Vec3> velocity;  // dF/ds in frame components

    long ne() const { return static_cast<long>(eps.size()); }
    long ns() const { return static_cast<long>(s.size()); }
    long size() const { return ne() * ns(); }
    long index(long i, long j) const { return i * ns() + j; }
    double eps_step() const { return eps.size() > 1 ? eps[1] - eps[0] : 1.0; }
    double s_step() const { return s.size() > 1 ? s[1] - s[0] : 1.0; }
};

struct UniformGrid {
    double start = 0.0;
    double stop = 1.0;
    long count = 2;
    std::vector<double> values() const;
};

inline constexpr double kSingularTol = 1e-6;

// Geodesics of curvature H from alpha(eps) in direction alpha.direction(eps).
// eps_grid has count >= 5; s samples are s_min, s_min + step, ..., s_max.
SurfacePatch build_ruled_surface(const ModelSpace& space, const AlphaCurve& alpha, double H, const UniformGrid& eps_grid,
                                 double s_min, double s_max, double s_step);

// Flows every sample of gamma along T. With closed_s the trace must cover one period [0, P)
// of a closed geodesic.
SurfacePatch build_vertical_cylinder(const ModelSpace& space, const GeodesicTrace& gamma, const UniformGrid& fiber_grid,
                                     bool closed_s = false);

struct SurfacePointData {
    Vec3 N = Vec3::Zero();
    double Nh_norm = 0.0;
    double NT = 0.0;
    Vec3 nu_h = Vec3::Zero(), Z = Vec3::Zero(), S = Vec3::Zero();
    double BZZ = 0.0, BZS = 0.0, BSS = 0.0;
    double H = 0.0;
    double f_eps = 0.0;
    bool singular = false;
};

// unit normal (V x gamma') / |V x gamma'| in frame components
Vec3 node_normal(const SurfacePatch& patch, long node);

SurfacePointData point_geometry(const SurfacePatch& patch, long node);

// all nodes; singular nodes are flagged rather than thrown
struct SurfaceFields {
    std::vector<SurfacePointData> nodes;
    long singular_count = 0;
    long first_singular = -1;
    void require_regular() const;
};

SurfaceFields compute_fields(const SurfacePatch& patch);

// quadrature weights for dSigma = f_eps deps ds (trapezoid, periodic in s when closed)
std::vector<double> area_weights(const SurfacePatch& patch, const SurfaceFields& fields);

double sr_area(const SurfacePatch& patch, const SurfaceFields& fields);
double sr_area(const SurfacePatch& patch);

struct SupportBox {
    long i0 = 0, i1 = -1, j0 = 0, j1 = -1;
    bool empty() const { return i1 < i0 || j1 < j0; }
};

SupportBox support_of(const SurfacePatch& patch, const std::vector<double>& u);

struct VariationSpec {
    std::vector<double> u;  // normal speed at each node
    std::vector<double> s_values;
    double exp_step = 1e-3;
};

struct VariationValue {
    double s = 0.0;
    double area = 0.0;    // area of the part of the patch that moves, plus a fixed margin
    double volume = 0.0;  // signed volume swept between the patch and its variation
};

// Linear variation exp_p(s u(p) N_p).
std::vector<VariationValue> normal_variation_functionals(const SurfacePatch& patch, const SurfaceFields& fields,
                                                         const VariationSpec& spec);

// smooth bump supported away from a two-cell collar, centred in the patch
std::vector<double> interior_bump(const SurfacePatch& patch);

double surface_integral(const SurfacePatch& patch, const SurfaceFields& fields, const std::vector<double>& u);

std::vector<double> mean_zero_projection(const SurfacePatch& patch, const SurfaceFields& fields,
                                         const std::vector<double>& u);

}  // namespace subrlab
