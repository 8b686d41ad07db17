#include "subrlab/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "subrlab/errors.hpp"
#include "subrlab/numerics.hpp"

namespace subrlab {

namespace {

void validate(const GeodesicSpec& spec) {
    if (std::abs(spec.direction[2]) > 1e-12 || std::abs(spec.direction.norm() - 1.0) > 1e-12) {
        throw ValidationError("geodesic direction must be a horizontal unit vector");
    }
    if (!(spec.step > 0.0) || !(spec.s_max >= 0.0) || !(spec.s_min <= 0.0)) {
        throw ValidationError("geodesic needs step > 0, s_max >= 0 and s_min <= 0");
    }
    if (spec.substeps < 1) throw ValidationError("substeps must be at least 1");
    if (!std::isfinite(spec.lambda)) throw ValidationError("lambda must be finite");
}

long sample_count(double span, double step) {
    return static_cast<long>(std::floor(std::abs(span) / step + 1e-9));
}

void check_chart(const ModelSpace& space, const Vec4& p, double s) {
    if (space.kappa() == -1 && !(space.chart_margin(p) > 1e-12)) {
        std::ostringstream os;
        os << "geodesic left the disk product at s = " << s;
        throw ChartExit(os.str(), s);
    }
}

// integrates one direction, returning internal points at spacing h (sign included)
std::vector<GeodesicSample> run(const ModelSpace& space, const GeodesicSample& start, double lambda, double h,
                                long nsteps) {
    std::vector<GeodesicSample> out;
    out.reserve(static_cast<std::size_t>(nsteps) + 1);
    out.push_back(start);
    GeodesicSample cur = start;
    for (long k = 0; k < nsteps; ++k) {
        cur = geodesic_step(space, cur, lambda, h);
        // avoid accumulating s by repeated addition
        cur.s = start.s + h * static_cast<double>(k + 1);
        out.push_back(cur);
    }
    return out;
}

}  // namespace

long GeodesicTrace::origin_index() const {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (std::abs(samples[i].s) <= 0.25 * step) return static_cast<long>(i);
    }
    return 0;
}

Vec3 geodesic_velocity(const Vec3& w0, double lambda, double s) { return rotate_horizontal(w0, 2.0 * lambda * s); }

GeodesicSample geodesic_step(const ModelSpace& space, const GeodesicSample& from, double lambda, double h) {
    // classical RK4 on the coupled system p' = aX + bY, a' = 2 lambda b, b' = -2 lambda a
    const double l2 = 2.0 * lambda;
    auto wdot = [&](const Vec3& w) { return Vec3(l2 * w[1], -l2 * w[0], 0.0); };
    const Vec4& p = from.point;
    const Vec3& w = from.velocity;
    const Vec4 k1 = space.from_frame_ambient(p, w);
    const Vec3 m1 = wdot(w);
    const Vec4 p2 = p + 0.5 * h * k1;
    const Vec3 w2 = w + 0.5 * h * m1;
    check_chart(space, p2, from.s + 0.5 * h);
    const Vec4 k2 = space.from_frame_ambient(p2, w2);
    const Vec3 m2 = wdot(w2);
    const Vec4 p3 = p + 0.5 * h * k2;
    const Vec3 w3 = w + 0.5 * h * m2;
    check_chart(space, p3, from.s + 0.5 * h);
    const Vec4 k3 = space.from_frame_ambient(p3, w3);
    const Vec3 m3 = wdot(w3);
    const Vec4 p4 = p + h * k3;
    const Vec3 w4 = w + h * m3;
    check_chart(space, p4, from.s + h);
    const Vec4 k4 = space.from_frame_ambient(p4, w4);
    const Vec3 m4 = wdot(w4);
    GeodesicSample next;
    next.s = from.s + h;
    next.point = space.retract(p + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    next.velocity = w + h / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
    check_chart(space, next.point, next.s);
    return next;
}

GeodesicTrace integrate_geodesic(const ModelSpace& space, const GeodesicSpec& spec) {
    validate(spec);
    space.require_domain(spec.start);
    const double h = spec.step / spec.substeps;
    const long nf = sample_count(spec.s_max, spec.step);
    const long nb = sample_count(spec.s_min, spec.step);

    const GeodesicSample start{0.0, spec.start, spec.direction};
    const auto fwd = run(space, start, spec.lambda, h, nf * spec.substeps);
    const auto bwd = run(space, start, spec.lambda, -h, nb * spec.substeps);

    // fine-grid curve in increasing s, used for the drift scan
    std::vector<GeodesicSample> fine;
    fine.reserve(fwd.size() + bwd.size());
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) fine.push_back(*it);
    fine.insert(fine.end(), fwd.begin() + 1, fwd.end());

    GeodesicTrace trace;
    trace.kappa = space.kappa();
    trace.lambda = spec.lambda;
    trace.step = spec.step;
    trace.substeps = spec.substeps;
    for (std::size_t i = 0; i < fine.size(); i += static_cast<std::size_t>(spec.substeps)) {
        trace.samples.push_back(fine[i]);
    }
    for (auto& smp : trace.samples) smp.s = std::round(smp.s / spec.step) * spec.step;

    DriftReport d;
    for (const auto& smp : fine) {
        d.speed = std::max(d.speed, std::abs(smp.velocity.norm() - 1.0));
        d.vertical = std::max(d.vertical, std::abs(smp.velocity[2]));
    }
    trace.drift = d;
    if (d.max() > kDriftLimit) {
        std::ostringstream os;
        os << "geodesic drift " << d.max() << " exceeds " << kDriftLimit << "; halve the step";
        throw StepTooLarge(os.str(), d.max());
    }
    return trace;
}

Eigen::Vector3d hopf_half(const Vec4& p) {
    const double x1 = p[0], y1 = p[1], x2 = p[2], y2 = p[3];
    return 0.5 * Eigen::Vector3d(x1 * x1 + y1 * y1 - x2 * x2 - y2 * y2, 2.0 * (x2 * y1 - x1 * y2),
                                 2.0 * (x1 * x2 + y1 * y2));
}

Eigen::Vector3d hopf_half_push(const Vec4& p, const Vec4& w) {
    const double x1 = p[0], y1 = p[1], x2 = p[2], y2 = p[3];
    return Eigen::Vector3d(x1 * w[0] + y1 * w[1] - x2 * w[2] - y2 * w[3],
                           w[2] * y1 + x2 * w[1] - w[0] * y2 - x1 * w[3],
                           w[0] * x2 + x1 * w[2] + w[1] * y2 + y1 * w[3]);
}

ProjectionCurvature projection_curvature_stats(const ModelSpace& space, const GeodesicTrace& trace) {
    const long n = static_cast<long>(trace.samples.size());
    if (n < 5) throw ValidationError("projection curvature needs at least 5 samples");
    const double h = trace.step;
    const bool sphere = space.kappa() == 1;
    std::vector<Eigen::Vector3d> q(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const Vec4& p = trace.samples[i].point;
        q[i] = sphere ? hopf_half(p) : Eigen::Vector3d(p[0], p[1], 0.0);
    }
    auto at = [&](long k) -> const Eigen::Vector3d& { return q[k]; };
    std::vector<double> h_vals;
    const long lo = std::min<long>(2, n / 2), hi = std::max<long>(n - 2, lo + 1);
    for (long i = lo; i < hi; ++i) {
        const Eigen::Vector3d d1 = fd_first<Eigen::Vector3d>(at, i, n, h);
        const Eigen::Vector3d d2 = fd_second<Eigen::Vector3d>(at, i, n, h);
        const double speed = d1.norm();
        if (speed < 1e-8) throw DegenerateProjection("projected curve has vanishing speed");
        const Vec4& p = trace.samples[i].point;
        // curvature vector of the projection points along d pi(-J gamma')
        const Vec4 minus_jw = -space.from_frame(p, j_rotate(trace.samples[i].velocity));
        double k = 0.0;
        if (sphere) {
            const Eigen::Vector3d ns = q[i].normalized();
            const Eigen::Vector3d nu = ns.cross(d1) / speed;
            k = ns.dot(d1.cross(d2)) / (speed * speed * speed);
            k *= (hopf_half_push(p, minus_jw).dot(nu) >= 0.0) ? 1.0 : -1.0;
        } else {
            const double kap = space.kappa();
            const double rh = space.rho(p);
            const Eigen::Vector2d nu(-d1[1] / speed, d1[0] / speed);
            const double ke = (d1[0] * d2[1] - d1[1] * d2[0]) / (speed * speed * speed);
            const Eigen::Vector2d grad_log_rho = -2.0 * kap * rh * Eigen::Vector2d(p[0], p[1]);
            k = (ke - grad_log_rho.dot(nu)) / rh;
            k *= (Eigen::Vector2d(minus_jw[0], minus_jw[1]).dot(nu) >= 0.0) ? 1.0 : -1.0;
        }
        h_vals.push_back(k);
    }
    ProjectionCurvature out;
    const double m = pairwise_sum(h_vals) / static_cast<double>(h_vals.size());
    std::vector<double> sq(h_vals.size());
    for (std::size_t i = 0; i < h_vals.size(); ++i) sq[i] = (h_vals[i] - m) * (h_vals[i] - m);
    out.mean = m;
    out.stddev = h_vals.size() > 1 ? std::sqrt(pairwise_sum(sq) / static_cast<double>(h_vals.size() - 1)) : 0.0;
    out.min = *std::min_element(h_vals.begin(), h_vals.end());
    out.max = *std::max_element(h_vals.begin(), h_vals.end());
    return out;
}

DriftReport position_drift(const ModelSpace& space, const GeodesicTrace& trace) {
    DriftReport d;
    const long n = static_cast<long>(trace.samples.size());
    if (n < 6) return d;
    for (long i = 0; i < n; ++i) {
        const Vec4 v =
            fd_first<Vec4>([&](long k) -> const Vec4& { return trace.samples[k].point; }, i, n, trace.step);
        const Vec3 w = space.to_frame(trace.samples[i].point, v);
        d.speed = std::max(d.speed, std::abs(w.norm() - 1.0));
        d.vertical = std::max(d.vertical, std::abs(w[2]));
    }
    return d;
}

double projection_curvature(const ModelSpace& space, const GeodesicTrace& trace) {
    return projection_curvature_stats(space, trace).mean;
}

namespace {

Eigen::Matrix<double, 8, 1> phase(const ModelSpace& space, const GeodesicSample& smp) {
    Eigen::Matrix<double, 8, 1> z;
    z << smp.point, space.from_frame(smp.point, smp.velocity);
    return z;
}

}  // namespace

CompletenessResult classify_completeness(const ModelSpace& space, const GeodesicTrace& trace, double period_tol) {
    CompletenessResult res;
    const long n = static_cast<long>(trace.samples.size());
    const long o = trace.origin_index();
    const auto z0 = phase(space, trace.samples[o]);
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    for (long i = 0; i < n; ++i) d[i] = (phase(space, trace.samples[i]) - z0).norm();

    auto dist_at = [&](long k, double s) {
        const GeodesicSample& base = trace.samples[k];
        return (phase(space, geodesic_step(space, base, trace.lambda, s - base.s)) - z0).norm();
    };

    double best = std::numeric_limits<double>::infinity();
    for (long i = o + 1; i < n - 1; ++i) {
        const double s = trace.samples[i].s;
        if (s < 1.0) continue;
        best = std::min(best, d[i]);
        if (!(d[i] <= d[i - 1] && d[i] <= d[i + 1])) continue;
        // golden-section refinement of the local minimum
        double a = trace.samples[i - 1].s, b = trace.samples[i + 1].s;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - g * (b - a), e = a + g * (b - a);
        double fc = dist_at(i, c), fe = dist_at(i, e);
        for (int it = 0; it < 80 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
            if (fc < fe) {
                b = e; e = c; fe = fc;
                c = b - g * (b - a); fc = dist_at(i, c);
            } else {
                a = c; c = e; fc = fe;
                e = a + g * (b - a); fe = dist_at(i, e);
            }
        }
        const double sm = fc < fe ? c : e;
        const double dm = std::min(fc, fe);
        best = std::min(best, dm);
        if (dm < period_tol) {
            res.kind = Completeness::closed;
            res.period = sm;
            res.min_distance = dm;
            return res;
        }
    }
    res.min_distance = best;
    res.kind = best > 10.0 * period_tol ? Completeness::injective : Completeness::undetermined;
    return res;
}

const char* to_string(Completeness c) {
    switch (c) {
        case Completeness::injective: return "injective";
        case Completeness::closed: return "closed";
        default: return "undetermined";
    }
}

}  // namespace subrlab
