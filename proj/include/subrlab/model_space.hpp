#pragma once

#include <Eigen/Dense>
#include <array>

namespace subrlab {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Points always live in a 4-vector. For kappa <= 0 the layout is (x, y, t, 0),
// for kappa = 1 it is (x1, y1, x2, y2) on the unit sphere.
// Tangent vectors in coordinates use the same layout.

enum class ChartKind { disk_product, sphere_embedded };

enum FrameIndex { kX = 0, kY = 1, kT = 2 };

struct Frame {
    Vec4 X, Y, T;
    const Vec4& operator[](int i) const { return i == kX ? X : (i == kY ? Y : T); }
};

class ModelSpace {
public:
    explicit ModelSpace(int kappa);

    int kappa() const { return kappa_; }
    ChartKind chart_kind() const { return kappa_ == 1 ? ChartKind::sphere_embedded : ChartKind::disk_product; }
    int coord_dim() const { return kappa_ == 1 ? 4 : 3; }
    double webster_curvature(const Vec4& p) const;

    bool in_domain(const Vec4& p, double tol = 1e-10) const;
    void require_domain(const Vec4& p) const;

    // 1 + kappa (x^2 + y^2); only meaningful for kappa <= 0
    double chart_margin(const Vec4& p) const;
    double rho(const Vec4& p) const;

    Frame frame_at(const Vec4& p) const;
    // same formulas without the domain check; integrators evaluate off-sphere stages
    Frame frame_ambient(const Vec4& p) const;
    Vec4 from_frame_ambient(const Vec4& p, const Vec3& v) const;
    // coordinate Jacobian of frame field i at p (columns are d/dcoord)
    Mat4 frame_jacobian(int i, const Vec4& p) const;

    // [e_i, e_j](p) from the analytic Jacobians, expressed in the frame
    Vec3 bracket(int i, int j, const Vec4& p) const;

    Vec3 to_frame(const Vec4& p, const Vec4& w) const;
    Vec4 from_frame(const Vec4& p, const Vec3& v) const;

    // metric tensor evaluated directly from the coordinate expression
    double coord_metric(const Vec4& p, const Vec4& u, const Vec4& v) const;
    // contact form eta evaluated on a coordinate vector
    double eta(const Vec4& p, const Vec4& w) const;

    // projection back onto the chart (renormalization on the sphere)
    Vec4 retract(const Vec4& p) const;

    // flow of T for time s
    Vec4 reeb_flow(const Vec4& p, double s) const;
    // differential of the T-flow applied to a coordinate vector
    Vec4 reeb_flow_push(const Vec4& w, double s) const;

    Vec4 make_point(double a, double b, double c, double d = 0.0) const;

private:
    int kappa_;
};

// frame-component algebra; these do not depend on the base point
Vec3 j_rotate(const Vec3& v);
// rotation by -angle in the (a,b) plane, c untouched; the flow of a' = b, b' = -a
Vec3 rotate_horizontal(const Vec3& w, double angle);
double dot(const Vec3& u, const Vec3& v);

struct ConnectionTable {
    int kappa;
    // coefficient <nabla_{e_i} e_j, e_k>
    double operator()(int i, int j, int k) const;
    // nabla_u v for fields with constant frame components
    Vec3 gamma(const Vec3& u, const Vec3& v) const;
};

ConnectionTable connection_table(int kappa);

// D_u v where dv is the directional derivative of the components of v along u
Vec3 covariant_derivative(const ConnectionTable& table, const Vec3& u, const Vec3& v, const Vec3& dv);

// R(u,v)w = D_v D_u w - D_u D_v w + D_[u,v] w
Vec3 curvature(int kappa, const Vec3& u, const Vec3& v, const Vec3& w);
double ricci(int kappa, const Vec3& v);

struct ExpResult {
    Vec4 point;
    Vec3 velocity;  // frame components of the geodesic velocity at the endpoint
};

ExpResult riemannian_exp_full(const ModelSpace& space, const Vec4& p, const Vec3& v, double length,
                              double step = 1e-3);
Vec4 riemannian_exp(const ModelSpace& space, const Vec4& p, const Vec3& v, double length,
                    double step = 1e-3);

}  // namespace subrlab
