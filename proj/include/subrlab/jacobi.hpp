#pragma once

#include <functional>
#include <vector>

#include "subrlab/geodesics.hpp"

namespace subrlab {

struct JacobiState {
    Vec3 V = Vec3::Zero();
    Vec3 Vprime = Vec3::Zero();  // covariant derivative along the geodesic
    double s = 0.0;
};

struct JacobiTrace {
    int kappa = 0;
    double lambda = 0.0;
    double mu = 0.0;
    std::vector<JacobiState> states;
    std::vector<double> conserved;  // lambda <V,T> + <V, gamma'>

    std::vector<double> vertical() const;  // f = <V,T>
    double conserved_drift() const;
};

JacobiTrace integrate_jacobi(const ModelSpace& space, const GeodesicTrace& trace, const JacobiState& initial);

// right-hand side of the first-order system in frame components
void jacobi_rhs(int kappa, double lambda, const Vec3& w, const Vec3& v, const Vec3& p, Vec3& dv, Vec3& dp);

// V' with <V',gamma'> = 0 and <V',T> = <V,J gamma'>; m is the free J gamma' component
Vec3 admissible_vprime(const Vec3& w, const Vec3& V, double m);

// f'(0) and f''(0) of f = <V,T> from the state and the velocity
double vertical_d1(const Vec3& w, const JacobiState& st);
double vertical_d2(double lambda, const Vec3& w, const JacobiState& st);

struct VerticalClosedForm {
    enum class Branch { hyperbolic, polynomial, trigonometric };
    Branch branch = Branch::polynomial;
    double mu = 0.0;
    double a = 0.0, b = 0.0, c = 0.0;

    double operator()(double s) const;
    double d1(double s) const;
    double d2(double s) const;
};

inline constexpr double kMuBranchTol = 1e-12;

VerticalClosedForm vertical_closed_form(double mu, double f0, double f0p, double f0pp);

// initial curve of a geodesic family: base points and direction angles in the frame
struct AlphaCurve {
    std::function<Vec4(double)> point;
    std::function<Vec4(double)> velocity;  // coordinate derivative of point
    std::function<double(double)> angle;
    std::function<double(double)> angle_rate;

    Vec3 direction(double eps) const;
};

// Jacobi data at s = 0 induced by the family built on alpha
JacobiState alpha_initial_state(const ModelSpace& space, const AlphaCurve& alpha, double eps = 0.0);

struct FamilySample {
    double s;
    Vec3 V;
};

std::vector<FamilySample> family_oracle(const ModelSpace& space, const AlphaCurve& alpha, double lambda, double eps,
                                        double s_max, double step = 1e-3, int substeps = 1);

}  // namespace subrlab
