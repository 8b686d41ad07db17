#include "subrlab/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "subrlab/errors.hpp"

namespace subrlab {

namespace {
const Vec3 kT3(0.0, 0.0, 1.0);
}

std::vector<double> JacobiTrace::vertical() const {
    std::vector<double> f;
    f.reserve(states.size());
    for (const auto& st : states) f.push_back(st.V[2]);
    return f;
}

double JacobiTrace::conserved_drift() const {
    if (conserved.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(conserved.begin(), conserved.end());
    return *hi - *lo;
}

void jacobi_rhs(int kappa, double lambda, const Vec3& w, const Vec3& v, const Vec3& p, Vec3& dv, Vec3& dp) {
    const ConnectionTable g{kappa};
    dv = p - g.gamma(w, v);
    dp = -curvature(kappa, w, v, w) - 2.0 * lambda * (j_rotate(p) - v.dot(w) * kT3) - g.gamma(w, p);
}

Vec3 admissible_vprime(const Vec3& w, const Vec3& V, double m) {
    const Vec3 jw = j_rotate(w);
    return V.dot(jw) * kT3 + m * jw;
}

double vertical_d1(const Vec3& w, const JacobiState& st) { return 2.0 * st.V.dot(j_rotate(w)); }

double vertical_d2(double lambda, const Vec3& w, const JacobiState& st) {
    return 2.0 * (st.Vprime.dot(j_rotate(w)) + 2.0 * lambda * st.V.dot(w) - st.V[2]);
}

JacobiTrace integrate_jacobi(const ModelSpace& space, const GeodesicTrace& trace, const JacobiState& initial) {
    if (trace.samples.empty()) throw ValidationError("empty geodesic trace");
    if (trace.kappa != space.kappa()) throw ValidationError("trace belongs to a different model space");
    if (std::abs(initial.s - trace.samples.front().s) > 1e-12) {
        std::ostringstream os;
        os << "initial Jacobi state at s = " << initial.s << " but trace starts at " << trace.samples.front().s;
        throw MisalignedBase(os.str());
    }
    const int kappa = space.kappa();
    const double lambda = trace.lambda;
    JacobiTrace out;
    out.kappa = kappa;
    out.lambda = lambda;
    out.mu = 4.0 * (lambda * lambda + kappa);
    out.states.reserve(trace.samples.size());
    out.conserved.reserve(trace.samples.size());

    const double h = trace.step / trace.substeps;
    Vec3 v = initial.V, p = initial.Vprime;
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        const GeodesicSample& smp = trace.samples[i];
        out.states.push_back({v, p, smp.s});
        out.conserved.push_back(lambda * v[2] + v.dot(smp.velocity));
        if (i + 1 == trace.samples.size()) break;
        for (int k = 0; k < trace.substeps; ++k) {
            const double s0 = h * k;
            const Vec3 w0 = geodesic_velocity(smp.velocity, lambda, s0);
            const Vec3 wm = geodesic_velocity(smp.velocity, lambda, s0 + 0.5 * h);
            const Vec3 w1 = geodesic_velocity(smp.velocity, lambda, s0 + h);
            Vec3 a1, b1, a2, b2, a3, b3, a4, b4;
            jacobi_rhs(kappa, lambda, w0, v, p, a1, b1);
            jacobi_rhs(kappa, lambda, wm, v + 0.5 * h * a1, p + 0.5 * h * b1, a2, b2);
            jacobi_rhs(kappa, lambda, wm, v + 0.5 * h * a2, p + 0.5 * h * b2, a3, b3);
            jacobi_rhs(kappa, lambda, w1, v + h * a3, p + h * b3, a4, b4);
            v += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            p += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        }
    }
    return out;
}

VerticalClosedForm vertical_closed_form(double mu, double f0, double f0p, double f0pp) {
    VerticalClosedForm cf;
    cf.mu = mu;
    if (std::abs(mu) < kMuBranchTol) {
        cf.branch = VerticalClosedForm::Branch::polynomial;
        cf.a = 0.5 * f0pp;
        cf.b = f0p;
        cf.c = f0;
    } else if (mu < 0.0) {
        const double k = std::sqrt(-mu);
        cf.branch = VerticalClosedForm::Branch::hyperbolic;
        cf.a = f0p;
        cf.b = f0pp / k;
        cf.c = f0 + f0pp / mu;
    } else {
        const double k = std::sqrt(mu);
        cf.branch = VerticalClosedForm::Branch::trigonometric;
        cf.a = f0p;
        cf.b = f0pp / k;
        cf.c = f0 + f0pp / mu;
    }
    return cf;
}

double VerticalClosedForm::operator()(double s) const {
    switch (branch) {
        case Branch::polynomial: return a * s * s + b * s + c;
        case Branch::hyperbolic: {
            const double k = std::sqrt(-mu);
            return (a * std::sinh(k * s) + b * std::cosh(k * s)) / k + c;
        }
        default: {
            const double k = std::sqrt(mu);
            return (a * std::sin(k * s) - b * std::cos(k * s)) / k + c;
        }
    }
}

double VerticalClosedForm::d1(double s) const {
    switch (branch) {
        case Branch::polynomial: return 2.0 * a * s + b;
        case Branch::hyperbolic: {
            const double k = std::sqrt(-mu);
            return a * std::cosh(k * s) + b * std::sinh(k * s);
        }
        default: {
            const double k = std::sqrt(mu);
            return a * std::cos(k * s) + b * std::sin(k * s);
        }
    }
}

double VerticalClosedForm::d2(double s) const {
    switch (branch) {
        case Branch::polynomial: return 2.0 * a;
        case Branch::hyperbolic: {
            const double k = std::sqrt(-mu);
            return k * (a * std::sinh(k * s) + b * std::cosh(k * s));
        }
        default: {
            const double k = std::sqrt(mu);
            return k * (-a * std::sin(k * s) + b * std::cos(k * s));
        }
    }
}

Vec3 AlphaCurve::direction(double eps) const {
    const double th = angle(eps);
    return Vec3(std::cos(th), std::sin(th), 0.0);
}

JacobiState alpha_initial_state(const ModelSpace& space, const AlphaCurve& alpha, double eps) {
    const Vec4 p = alpha.point(eps);
    const Vec3 u = alpha.direction(eps);
    JacobiState st;
    st.s = 0.0;
    st.V = space.to_frame(p, alpha.velocity(eps));
    // D_V U with U = cos(theta) X + sin(theta) Y along alpha
    st.Vprime = alpha.angle_rate(eps) * j_rotate(u) + ConnectionTable{space.kappa()}.gamma(st.V, u);
    return st;
}

std::vector<FamilySample> family_oracle(const ModelSpace& space, const AlphaCurve& alpha, double lambda, double eps,
                                        double s_max, double step, int substeps) {
    auto trace_at = [&](double e) {
        GeodesicSpec spec;
        spec.start = alpha.point(e);
        spec.direction = alpha.direction(e);
        spec.lambda = lambda;
        spec.s_max = s_max;
        spec.step = step;
        spec.substeps = substeps;
        return integrate_geodesic(space, spec);
    };
    const GeodesicTrace plus = trace_at(eps), mid = trace_at(0.0), minus = trace_at(-eps);
    const std::size_t n = std::min({plus.samples.size(), mid.samples.size(), minus.samples.size()});
    std::vector<FamilySample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec4 d = (plus.samples[i].point - minus.samples[i].point) / (2.0 * eps);
        out.push_back({mid.samples[i].s, space.to_frame(mid.samples[i].point, d)});
    }
    return out;
}

}  // namespace subrlab
