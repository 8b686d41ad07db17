#include "subrlab/surfaces.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>

#include "subrlab/errors.hpp"
#include "subrlab/numerics.hpp"

namespace subrlab {

namespace {

const Vec3 kT3(0.0, 0.0, 1.0);

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

void check_immersion(const SurfacePatch& patch) {
    for (long k = 0; k < patch.size(); ++k) {
        if (patch.V_field[k].cross(patch.velocity[k]).norm() < 1e-10) {
            std::ostringstream os;
            os << "dF/deps and dF/ds are dependent at eps = " << patch.eps[k / patch.ns()]
               << ", s = " << patch.s[k % patch.ns()];
            throw DegenerateImmersion(os.str());
        }
    }
}

// <V,T> must be negative for Z = dF/ds; otherwise reverse eps
void orient(SurfacePatch& patch) {
    const long centre = patch.index(patch.ne() / 2, patch.ns() / 2);
    if (patch.V_field[centre][2] <= 0.0) return;
    const long ne = patch.ne(), ns = patch.ns();
    SurfacePatch out = patch;
    out.eps_reversed = !patch.eps_reversed;
    for (long i = 0; i < ne; ++i) {
        out.eps[i] = -patch.eps[ne - 1 - i];
        for (long j = 0; j < ns; ++j) {
            const long from = patch.index(ne - 1 - i, j), to = patch.index(i, j);
            out.points[to] = patch.points[from];
            out.velocity[to] = patch.velocity[from];
            out.V_field[to] = -patch.V_field[from];
        }
    }
    patch = std::move(out);
}

bool geometry_at(const SurfacePatch& patch, long k, SurfacePointData& d) {
    const long ns = patch.ns(), ne = patch.ne();
    const long i = k / ns, j = k % ns;
    const Vec3& V = patch.V_field[k];
    const Vec3& w = patch.velocity[k];
    const Vec3 n = node_normal(patch, k);
    d = SurfacePointData{};
    d.N = n;
    d.Nh_norm = std::hypot(n[0], n[1]);
    d.NT = n[2];
    if (d.Nh_norm < kSingularTol || V[2] >= 0.0) {
        d.singular = true;
        return false;
    }
    d.nu_h = Vec3(n[0], n[1], 0.0) / d.Nh_norm;
    d.Z = j_rotate(d.nu_h);
    d.S = d.NT * d.nu_h - d.Nh_norm * kT3;
    d.f_eps = V.dot(d.S);

    const ConnectionTable g{patch.space.kappa()};
    const Vec3 dn_s = fd_first<Vec3>([&](long jj) { return node_normal(patch, patch.index(i, jj)); }, j, ns,
                                     patch.s_step(), patch.closed_s);
    const Vec3 dn_e =
        fd_first<Vec3>([&](long ii) { return node_normal(patch, patch.index(ii, j)); }, i, ne, patch.eps_step());
    const Vec3 dzn = dn_s + g.gamma(w, n);
    const Vec3 dvn = dn_e + g.gamma(V, n);
    const Vec3 dsn = (dvn - V.dot(w) * dzn) / d.f_eps;
    d.BZZ = -dzn.dot(d.Z);
    d.BZS = -dzn.dot(d.S);
    d.BSS = -dsn.dot(d.S);
    d.H = d.BZZ / (2.0 * d.Nh_norm);
    return true;
}

}  // namespace

std::vector<double> UniformGrid::values() const {
    if (count < 2 || !(stop > start)) throw ValidationError("grid needs count >= 2 and stop > start");
    std::vector<double> v(static_cast<std::size_t>(count));
    const double h = (stop - start) / static_cast<double>(count - 1);
    for (long i = 0; i < count; ++i) v[i] = start + h * static_cast<double>(i);
    v.back() = stop;
    return v;
}

SurfacePatch build_ruled_surface(const ModelSpace& space, const AlphaCurve& alpha, double H, const UniformGrid& eps_grid,
                                 double s_min, double s_max, double s_step) {
    if (eps_grid.count < 5) throw ValidationError("ruled surface needs at least 5 eps samples");
    if (!(s_min <= 0.0) || !(s_max >= 0.0) || !(s_max - s_min >= 4.0 * s_step)) {
        throw ValidationError("ruled surface needs s_min <= 0 <= s_max and at least 5 s samples");
    }
    SurfacePatch patch;
    patch.space = space;
    patch.H_target = H;
    patch.eps = eps_grid.values();
    const long ne = patch.ne();

    std::vector<GeodesicTrace> rows(static_cast<std::size_t>(ne));
    parallel_for(ne, [&](long b, long e) {
        for (long i = b; i < e; ++i) {
            const double ep = patch.eps[i];
            GeodesicSpec spec;
            spec.start = alpha.point(ep);
            spec.direction = alpha.direction(ep);
            spec.lambda = H;
            spec.s_min = s_min;
            spec.s_max = s_max;
            spec.step = s_step;
            try {
                rows[i] = integrate_geodesic(space, spec);
            } catch (const ChartExit& ex) {
                std::ostringstream os;
                os << "ruling at eps = " << ep << " left the chart at s = " << ex.s_exit;
                throw ChartExit(os.str(), ex.s_exit);
            }
        }
    });

    const long ns = static_cast<long>(rows[0].samples.size());
    for (const auto& smp : rows[0].samples) patch.s.push_back(smp.s);
    patch.points.resize(ne * ns);
    patch.velocity.resize(ne * ns);
    patch.V_field.resize(ne * ns);
    for (long i = 0; i < ne; ++i) {
        for (long j = 0; j < ns; ++j) {
            patch.points[i * ns + j] = rows[i].samples[j].point;
            patch.velocity[i * ns + j] = rows[i].samples[j].velocity;
        }
    }
    const double he = patch.eps_step();
    parallel_for(ne, [&](long b, long e) {
        for (long i = b; i < e; ++i) {
            for (long j = 0; j < ns; ++j) {
                const Vec4 d = fd_first<Vec4>([&](long ii) { return patch.points[ii * ns + j]; }, i, ne, he);
                patch.V_field[i * ns + j] = space.to_frame(patch.points[i * ns + j], d);
            }
        }
    });
    check_immersion(patch);
    orient(patch);
    return patch;
}

SurfacePatch build_vertical_cylinder(const ModelSpace& space, const GeodesicTrace& gamma, const UniformGrid& fiber_grid,
                                     bool closed_s) {
    if (gamma.kappa != space.kappa()) throw ValidationError("trace belongs to a different model space");
    if (gamma.samples.size() < 5) throw ValidationError("vertical cylinder needs at least 5 samples along gamma");
    if (fiber_grid.count < 5) throw ValidationError("vertical cylinder needs at least 5 fiber samples");
    if (closed_s) {
        const GeodesicSample next = geodesic_step(space, gamma.samples.back(), gamma.lambda, gamma.step);
        if ((next.point - gamma.samples.front().point).norm() > 1e-6 ||
            (next.velocity - gamma.samples.front().velocity).norm() > 1e-6) {
            throw ValidationError("closed_s needs a trace covering exactly one period of a closed geodesic");
        }
    }
    SurfacePatch patch;
    patch.space = space;
    patch.H_target = gamma.lambda;
    patch.closed_s = closed_s;
    patch.eps = fiber_grid.values();
    for (const auto& smp : gamma.samples) patch.s.push_back(smp.s);
    const long ne = patch.ne(), ns = patch.ns();
    patch.points.resize(ne * ns);
    patch.velocity.resize(ne * ns);
    patch.V_field.assign(ne * ns, kT3);
    for (long i = 0; i < ne; ++i) {
        for (long j = 0; j < ns; ++j) {
            const auto& smp = gamma.samples[j];
            const Vec4 q = space.reeb_flow(smp.point, patch.eps[i]);
            const Vec4 dq = space.reeb_flow_push(space.from_frame(smp.point, smp.velocity), patch.eps[i]);
            patch.points[i * ns + j] = q;
            patch.velocity[i * ns + j] = space.to_frame(q, dq);
        }
    }
    check_immersion(patch);
    orient(patch);
    return patch;
}

Vec3 node_normal(const SurfacePatch& patch, long node) {
    const Vec3 c = patch.V_field[node].cross(patch.velocity[node]);
    return c / c.norm();
}

SurfacePointData point_geometry(const SurfacePatch& patch, long node) {
    SurfacePointData d;
    if (!geometry_at(patch, node, d)) {
        std::ostringstream os;
        os << "singular node at eps = " << patch.eps[node / patch.ns()] << ", s = " << patch.s[node % patch.ns()]
           << " (|N_h| = " << d.Nh_norm << ")";
        throw SingularPoint(os.str(), node);
    }
    return d;
}

void SurfaceFields::require_regular() const {
    if (singular_count > 0) {
        std::ostringstream os;
        os << singular_count << " singular node(s), first at index " << first_singular;
        throw SingularPoint(os.str(), first_singular);
    }
}

SurfaceFields compute_fields(const SurfacePatch& patch) {
    SurfaceFields out;
    out.nodes.resize(static_cast<std::size_t>(patch.size()));
    parallel_for(patch.size(), [&](long b, long e) {
        for (long k = b; k < e; ++k) geometry_at(patch, k, out.nodes[k]);
    });
    for (long k = 0; k < patch.size(); ++k) {
        if (out.nodes[k].singular) {
            if (out.first_singular < 0) out.first_singular = k;
            ++out.singular_count;
        }
    }
    return out;
}

std::vector<double> area_weights(const SurfacePatch& patch, const SurfaceFields& fields) {
    const auto we = trapezoid_weights(patch.ne(), patch.eps_step(), false);
    const auto ws = trapezoid_weights(patch.ns(), patch.s_step(), patch.closed_s);
    std::vector<double> w(static_cast<std::size_t>(patch.size()));
    for (long i = 0; i < patch.ne(); ++i) {
        for (long j = 0; j < patch.ns(); ++j) {
            const long k = patch.index(i, j);
            w[k] = we[i] * ws[j] * fields.nodes[k].f_eps;
        }
    }
    return w;
}

double surface_integral(const SurfacePatch& patch, const SurfaceFields& fields, const std::vector<double>& u) {
    if (static_cast<long>(u.size()) != patch.size()) throw ValidationError("field size does not match the patch");
    const auto w = area_weights(patch, fields);
    std::vector<double> terms(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] == 0.0) continue;
        if (fields.nodes[k].singular) throw SingularPoint("integrand supported on a singular node", static_cast<long>(k));
        terms[k] = w[k] * u[k];
    }
    return pairwise_sum(terms);
}

double sr_area(const SurfacePatch& patch, const SurfaceFields& fields) {
    fields.require_regular();
    std::vector<double> nh(static_cast<std::size_t>(patch.size()));
    for (long k = 0; k < patch.size(); ++k) nh[k] = fields.nodes[k].Nh_norm;
    return surface_integral(patch, fields, nh);
}

double sr_area(const SurfacePatch& patch) { return sr_area(patch, compute_fields(patch)); }

SupportBox support_of(const SurfacePatch& patch, const std::vector<double>& u) {
    SupportBox b{patch.ne(), -1, patch.ns(), -1};
    for (long i = 0; i < patch.ne(); ++i) {
        for (long j = 0; j < patch.ns(); ++j) {
            if (u[patch.index(i, j)] == 0.0) continue;
            b.i0 = std::min(b.i0, i);
            b.i1 = std::max(b.i1, i);
            b.j0 = std::min(b.j0, j);
            b.j1 = std::max(b.j1, j);
        }
    }
    return b;
}

std::vector<VariationValue> normal_variation_functionals(const SurfacePatch& patch, const SurfaceFields& fields,
                                                         const VariationSpec& spec) {
    const long ne = patch.ne(), ns = patch.ns();
    if (static_cast<long>(spec.u.size()) != patch.size()) throw ValidationError("u size does not match the patch");
    const SupportBox box = support_of(patch, spec.u);
    std::vector<VariationValue> out;
    if (box.empty()) {
        const double a = sr_area(patch, fields);
        for (double s : spec.s_values) out.push_back({s, a, 0.0});
        return out;
    }
    if (box.i0 < 2 || box.i1 > ne - 3 || (!patch.closed_s && (box.j0 < 2 || box.j1 > ns - 3))) {
        throw ValidationError("variation must vanish on a two-cell boundary collar");
    }
    for (long k = 0; k < patch.size(); ++k) {
        if (spec.u[k] != 0.0 && fields.nodes[k].singular) {
            throw SingularPoint("variation supported on a singular node", k);
        }
    }

    // nodes within three cells of the support; stencils at the region edge only see fixed nodes
    const long r0 = std::max(0L, box.i0 - 3), r1 = std::min(ne - 1, box.i1 + 3);
    const long c0 = patch.closed_s ? 0 : std::max(0L, box.j0 - 3);
    const long c1 = patch.closed_s ? ns - 1 : std::min(ns - 1, box.j1 + 3);
    const long nr = r1 - r0 + 1, nc = c1 - c0 + 1;
    const auto we = trapezoid_weights(ne, patch.eps_step(), false);
    const auto ws = trapezoid_weights(ns, patch.s_step(), patch.closed_s);
    const ModelSpace& space = patch.space;

    struct Eval {
        double area, dvol;
    };
    auto evaluate = [&](double sigma) {
        std::vector<Vec4> q(static_cast<std::size_t>(nr * nc));
        std::vector<Vec3> U(q.size(), Vec3::Zero());
        parallel_for(nr, [&](long b, long e) {
            for (long a = b; a < e; ++a) {
                for (long c = 0; c < nc; ++c) {
                    const long k = patch.index(r0 + a, c0 + c);
                    const double u = spec.u[k];
                    if (u == 0.0) {
                        q[a * nc + c] = patch.points[k];
                        continue;
                    }
                    const ExpResult r = riemannian_exp_full(space, patch.points[k], fields.nodes[k].N, sigma * u,
                                                            spec.exp_step);
                    q[a * nc + c] = r.point;
                    U[a * nc + c] = u * r.velocity;
                }
            }
        });
        std::vector<double> area(q.size()), dvol(q.size());
        std::atomic<bool> singular{false};
        parallel_for(nr, [&](long b, long e) {
            for (long a = b; a < e; ++a) {
                for (long c = 0; c < nc; ++c) {
                    const Vec4& p = q[a * nc + c];
                    const Vec4 de = fd_first<Vec4>([&](long x) { return q[x * nc + c]; }, a, nr, patch.eps_step());
                    const Vec4 ds = fd_first<Vec4>([&](long y) { return q[a * nc + y]; }, c, nc, patch.s_step(),
                                                   patch.closed_s);
                    const Vec3 cr = space.to_frame(p, de).cross(space.to_frame(p, ds));
                    const double w = we[r0 + a] * ws[c0 + c];
                    const double h = std::hypot(cr[0], cr[1]);
                    if (spec.u[patch.index(r0 + a, c0 + c)] != 0.0 && h < kSingularTol * cr.norm()) singular = true;
                    area[a * nc + c] = w * h;
                    dvol[a * nc + c] = w * U[a * nc + c].dot(cr);
                }
            }
        });
        if (singular) {
            std::ostringstream os;
            os << "displaced surface has a singular node at variation parameter " << sigma;
            throw SingularAfterDisplacement(os.str());
        }
        return Eval{pairwise_sum(area), pairwise_sum(dvol)};
    };

    std::map<double, Eval> cache;
    auto at = [&](double sigma) -> const Eval& {
        auto it = cache.find(sigma);
        if (it == cache.end()) it = cache.emplace(sigma, evaluate(sigma)).first;
        return it->second;
    };
    for (double s : spec.s_values) {
        // Simpson with four panels on [0, s] for the volume
        double vol = 0.0;
        if (s != 0.0) {
            const double c[5] = {1, 4, 2, 4, 1};
            for (int m = 0; m <= 4; ++m) vol += c[m] * at(s * m / 4.0).dvol;
            vol *= s / 12.0;
        }
        out.push_back({s, at(s).area, vol});
    }
    return out;
}

std::vector<double> interior_bump(const SurfacePatch& patch) {
    const long ne = patch.ne(), ns = patch.ns();
    if (ne < 7 || (!patch.closed_s && ns < 7)) throw ValidationError("patch too small for an interior bump");
    const double ce = 0.5 * (patch.eps[2] + patch.eps[ne - 3]), re = 0.5 * (patch.eps[ne - 3] - patch.eps[2]);
    const double cs = 0.5 * (patch.s[2] + patch.s[ns - 3]), rs = 0.5 * (patch.s[ns - 3] - patch.s[2]);
    std::vector<double> phi(static_cast<std::size_t>(patch.size()));
    for (long i = 0; i < ne; ++i) {
        for (long j = 0; j < ns; ++j) {
            const double fs = patch.closed_s ? 1.0 : bump((patch.s[j] - cs) / rs);
            phi[patch.index(i, j)] = bump((patch.eps[i] - ce) / re) * fs;
        }
    }
    return phi;
}

std::vector<double> mean_zero_projection(const SurfacePatch& patch, const SurfaceFields& fields,
                                         const std::vector<double>& u) {
    const auto phi = interior_bump(patch);
    const double c = surface_integral(patch, fields, u) / surface_integral(patch, fields, phi);
    std::vector<double> out(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] - c * phi[k];
    return out;
}

}  // namespace subrlab
