#include "subrlab/model_space.hpp"

#include <cmath>
#include <sstream>

#include "subrlab/errors.hpp"

namespace subrlab {

namespace {

// linear frame fields on the sphere: e_i(p) = M_i p
Mat4 sphere_matrix(int i) {
    Mat4 m = Mat4::Zero();
    if (i == kX) {
        m(0, 2) = -1; m(1, 3) = 1; m(2, 0) = 1; m(3, 1) = -1;
    } else if (i == kY) {
        m(0, 3) = -1; m(1, 2) = -1; m(2, 1) = 1; m(3, 0) = 1;
    } else {
        m(0, 1) = -1; m(1, 0) = 1; m(2, 3) = -1; m(3, 2) = 1;
    }
    return m;
}

}  // namespace

Vec3 rotate_horizontal(const Vec3& w, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return Vec3(c * w[0] + s * w[1], -s * w[0] + c * w[1], w[2]);
}

ModelSpace::ModelSpace(int kappa) : kappa_(kappa) {
    if (kappa < -1 || kappa > 1) {
        throw ValidationError("kappa must be -1, 0 or 1");
    }
}

double ModelSpace::webster_curvature(const Vec4&) const { return static_cast<double>(kappa_); }

double ModelSpace::chart_margin(const Vec4& p) const {
    return 1.0 + kappa_ * (p[0] * p[0] + p[1] * p[1]);
}

double ModelSpace::rho(const Vec4& p) const { return 1.0 / chart_margin(p); }

bool ModelSpace::in_domain(const Vec4& p, double tol) const {
    if (!p.allFinite()) return false;
    if (kappa_ == 1) return std::abs(p.norm() - 1.0) <= tol;
    return chart_margin(p) > 0.0;
}

void ModelSpace::require_domain(const Vec4& p) const {
    if (!in_domain(p)) {
        std::ostringstream os;
        os << "point (" << p.transpose() << ") outside the chart of M(" << kappa_ << ")";
        throw ChartDomainViolation(os.str());
    }
}

Frame ModelSpace::frame_at(const Vec4& p) const {
    require_domain(p);
    return frame_ambient(p);
}

Vec4 ModelSpace::from_frame_ambient(const Vec4& p, const Vec3& v) const {
    const Frame f = frame_ambient(p);
    return v[0] * f.X + v[1] * f.Y + v[2] * f.T;
}

Frame ModelSpace::frame_ambient(const Vec4& p) const {
    Frame f;
    if (kappa_ == 1) {
        const double x1 = p[0], y1 = p[1], x2 = p[2], y2 = p[3];
        f.X = Vec4(-x2, y2, x1, -y1);
        f.Y = Vec4(-y2, -x2, y1, x1);
        f.T = Vec4(-y1, x1, -y2, x2);
        return f;
    }
    const double x = p[0], y = p[1], t = p[2];
    const double r = chart_margin(p);
    const double c = std::cos(2.0 * kappa_ * t), sn = std::sin(2.0 * kappa_ * t);
    f.X = Vec4(r * c, -r * sn, y * c + x * sn, 0.0);
    f.Y = Vec4(r * sn, r * c, y * sn - x * c, 0.0);
    f.T = Vec4(0.0, 0.0, 1.0, 0.0);
    return f;
}

Mat4 ModelSpace::frame_jacobian(int i, const Vec4& p) const {
    require_domain(p);
    if (kappa_ == 1) return sphere_matrix(i);
    Mat4 d = Mat4::Zero();
    if (i == kT) return d;
    const double x = p[0], y = p[1], t = p[2];
    const double k2 = 2.0 * kappa_;
    const double r = chart_margin(p);
    const double c = std::cos(k2 * t), sn = std::sin(k2 * t);
    if (i == kX) {
        d.row(0) << k2 * x * c, k2 * y * c, -k2 * r * sn, 0;
        d.row(1) << -k2 * x * sn, -k2 * y * sn, -k2 * r * c, 0;
        d.row(2) << sn, c, -k2 * y * sn + k2 * x * c, 0;
    } else {
        d.row(0) << k2 * x * sn, k2 * y * sn, k2 * r * c, 0;
        d.row(1) << k2 * x * c, k2 * y * c, -k2 * r * sn, 0;
        d.row(2) << -c, sn, k2 * y * c + k2 * x * sn, 0;
    }
    return d;
}

Vec3 ModelSpace::bracket(int i, int j, const Vec4& p) const {
    const Frame f = frame_at(p);
    const Vec4 br = frame_jacobian(j, p) * f[i] - frame_jacobian(i, p) * f[j];
    return to_frame(p, br);
}

Vec3 ModelSpace::to_frame(const Vec4& p, const Vec4& w) const {
    if (kappa_ == 1) {
        const Frame f = frame_at(p);
        return Vec3(f.X.dot(w), f.Y.dot(w), f.T.dot(w));
    }
    require_domain(p);
    const double x = p[0], y = p[1], t = p[2];
    const double rh = rho(p);
    const double c = std::cos(2.0 * kappa_ * t), sn = std::sin(2.0 * kappa_ * t);
    return Vec3(rh * (c * w[0] - sn * w[1]), rh * (sn * w[0] + c * w[1]),
                rh * (x * w[1] - y * w[0]) + w[2]);
}

Vec4 ModelSpace::from_frame(const Vec4& p, const Vec3& v) const {
    const Frame f = frame_at(p);
    return v[0] * f.X + v[1] * f.Y + v[2] * f.T;
}

double ModelSpace::eta(const Vec4& p, const Vec4& w) const {
    if (kappa_ == 1) {
        const double x1 = p[0], y1 = p[1], x2 = p[2], y2 = p[3];
        return x1 * w[1] - y1 * w[0] + x2 * w[3] - y2 * w[2];
    }
    return rho(p) * (p[0] * w[1] - p[1] * w[0]) + w[2];
}

double ModelSpace::coord_metric(const Vec4& p, const Vec4& u, const Vec4& v) const {
    require_domain(p);
    if (kappa_ == 1) {
        // round metric restricted to tangent vectors
        return u.dot(v);
    }
    const double rh = rho(p);
    return rh * rh * (u[0] * v[0] + u[1] * v[1]) + eta(p, u) * eta(p, v);
}

Vec4 ModelSpace::retract(const Vec4& p) const {
    if (kappa_ == 1) return p / p.norm();
    return p;
}

Vec4 ModelSpace::reeb_flow(const Vec4& p, double s) const {
    if (kappa_ == 1) return reeb_flow_push(p, s);
    Vec4 q = p;
    q[2] += s;
    return q;
}

Vec4 ModelSpace::reeb_flow_push(const Vec4& w, double s) const {
    if (kappa_ != 1) return w;
    const double c = std::cos(s), sn = std::sin(s);
    return Vec4(c * w[0] - sn * w[1], sn * w[0] + c * w[1], c * w[2] - sn * w[3], sn * w[2] + c * w[3]);
}

Vec4 ModelSpace::make_point(double a, double b, double c, double d) const {
    Vec4 p(a, b, c, kappa_ == 1 ? d : 0.0);
    require_domain(p);
    return p;
}

Vec3 j_rotate(const Vec3& v) { return Vec3(-v[1], v[0], 0.0); }

double dot(const Vec3& u, const Vec3& v) { return u.dot(v); }

Vec3 ConnectionTable::gamma(const Vec3& u, const Vec3& v) const {
    const double k = static_cast<double>(kappa);
    return Vec3(-u[1] * v[2] + (2.0 * k - 1.0) * u[2] * v[1],
                u[0] * v[2] + (1.0 - 2.0 * k) * u[2] * v[0],
                -u[0] * v[1] + u[1] * v[0]);
}

double ConnectionTable::operator()(int i, int j, int k) const {
    return gamma(Vec3::Unit(i), Vec3::Unit(j))[k];
}

ConnectionTable connection_table(int kappa) { return ConnectionTable{kappa}; }

Vec3 covariant_derivative(const ConnectionTable& table, const Vec3& u, const Vec3& v, const Vec3& dv) {
    return dv + table.gamma(u, v);
}

Vec3 curvature(int kappa, const Vec3& u, const Vec3& v, const Vec3& w) {
    const ConnectionTable g{kappa};
    const Vec3 uv = g.gamma(u, v) - g.gamma(v, u);
    return g.gamma(v, g.gamma(u, w)) - g.gamma(u, g.gamma(v, w)) + g.gamma(uv, w);
}

double ricci(int kappa, const Vec3& v) {
    double r = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Vec3 e = Vec3::Unit(i);
        r += curvature(kappa, e, v, e).dot(v);
    }
    return r;
}

ExpResult riemannian_exp_full(const ModelSpace& space, const Vec4& p, const Vec3& v, double length,
                              double step) {
    space.require_domain(p);
    if (!(step > 0.0)) throw ValidationError("exp step must be positive");
    ExpResult out{p, v};
    if (length == 0.0) return out;
    // horizontal components rotate at the constant rate (2 - 2 kappa) c
    const double rate = (2.0 - 2.0 * space.kappa()) * v[2];
    const long n = std::max<long>(1, static_cast<long>(std::ceil(std::abs(length) / step - 1e-9)));
    const double h = length / static_cast<double>(n);
    Vec4 q = p;
    for (long k = 0; k < n; ++k) {
        const double s0 = h * static_cast<double>(k);
        const Vec3 w0 = rotate_horizontal(v, rate * s0);
        const Vec3 wm = rotate_horizontal(v, rate * (s0 + 0.5 * h));
        const Vec3 w1 = rotate_horizontal(v, rate * (s0 + h));
        const Vec4 k1 = space.from_frame_ambient(q, w0);
        const Vec4 k2 = space.from_frame_ambient(q + 0.5 * h * k1, wm);
        const Vec4 k3 = space.from_frame_ambient(q + 0.5 * h * k2, wm);
        const Vec4 k4 = space.from_frame_ambient(q + h * k3, w1);
        q = space.retract(q + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        if (space.kappa() == -1 && space.chart_margin(q) <= 1e-12) {
            std::ostringstream os;
            os << "riemannian geodesic left the disk at parameter " << s0 + h;
            throw ChartExit(os.str(), s0 + h);
        }
    }
    out.point = q;
    out.velocity = rotate_horizontal(v, rate * length);
    return out;
}

Vec4 riemannian_exp(const ModelSpace& space, const Vec4& p, const Vec3& v, double length, double step) {
    return riemannian_exp_full(space, p, v, length, step).point;
}

}  // namespace subrlab
