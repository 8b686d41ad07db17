#include "subrlab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "subrlab/errors.hpp"
#include "subrlab/numerics.hpp"

namespace subrlab {

namespace {

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

// the two lobes of phi; the first one covers 0
double lobe_a(double x) { return bump((x + 0.3) / 0.65); }
double lobe_b(double x) { return bump((x - 0.65) / 0.3); }

double lobe_ratio() {
    static const double r = [] {
        const int n = 200000;
        std::vector<double> a(n), b(n);
        for (int k = 0; k < n; ++k) {
            const double x = -1.0 + (k + 0.5) * 2.0 / n;
            a[k] = lobe_a(x);
            b[k] = lobe_b(x);
        }
        return pairwise_sum(a) / pairwise_sum(b);
    }();
    return r;
}

void require_same_size(const SurfacePatch& patch, const std::vector<double>& v) {
    if (static_cast<long>(v.size()) != patch.size()) throw ValidationError("field size does not match the patch");
}

void require_regular_on(const SurfaceFields& fields, const std::vector<double>& u) {
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] != 0.0 && fields.nodes[k].singular) {
            throw SingularPoint("test function supported on a singular node", static_cast<long>(k));
        }
    }
}

void require_collar(const SurfacePatch& patch, const SupportBox& b) {
    if (b.empty()) return;
    if (b.i0 < 2 || b.i1 > patch.ne() - 3 || (!patch.closed_s && (b.j0 < 2 || b.j1 > patch.ns() - 3))) {
        throw ValidationError("test function must vanish on a two-cell boundary collar");
    }
}

double sum_weighted(const std::vector<double>& w, const std::vector<double>& x) {
    std::vector<double> t(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) t[k] = x[k] == 0.0 ? 0.0 : w[k] * x[k];
    return pairwise_sum(t);
}

}  // namespace

TestFunction make_test_function(const SurfacePatch& patch, const SurfaceFields& fields, std::vector<double> values) {
    require_same_size(patch, values);
    TestFunction tf;
    tf.values = std::move(values);
    const long ne = patch.ne(), ns = patch.ns();
    tf.z_derivative.assign(tf.values.size(), 0.0);
    tf.z_second.assign(tf.values.size(), 0.0);
    for (long i = 0; i < ne; ++i) {
        auto row = [&](long j) { return tf.values[patch.index(i, j)]; };
        for (long j = 0; j < ns; ++j) {
            tf.z_derivative[patch.index(i, j)] = fd_first<double>(row, j, ns, patch.s_step(), patch.closed_s);
            tf.z_second[patch.index(i, j)] = fd_second<double>(row, j, ns, patch.s_step(), patch.closed_s);
        }
    }
    tf.support_box = support_of(patch, tf.values);
    require_regular_on(fields, tf.values);
    tf.mean = surface_integral(patch, fields, tf.values);
    return tf;
}

double potential(const SurfacePatch& patch, const SurfacePointData& d) {
    const double K = patch.space.kappa();
    const double n2 = d.Nh_norm * d.Nh_norm;
    return 4.0 * d.H * d.H * n2 + (1.0 + d.BZS) * (1.0 + d.BZS) + 4.0 * (K - 1.0) * n2;
}

double index_form(const SurfacePatch& patch, const SurfaceFields& fields, const TestFunction& u, const TestFunction& v) {
    require_same_size(patch, u.values);
    require_same_size(patch, v.values);
    require_regular_on(fields, u.values);
    require_regular_on(fields, v.values);
    const auto w = area_weights(patch, fields);
    std::vector<double> t(u.values.size(), 0.0);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double a = u.z_derivative[k] * v.z_derivative[k], b = u.values[k] * v.values[k];
        if (a == 0.0 && b == 0.0) continue;
        const auto& d = fields.nodes[k];
        t[k] = w[k] * (a - potential(patch, d) * b) / d.Nh_norm;
    }
    return pairwise_sum(t);
}

std::vector<double> stability_operator(const SurfacePatch& patch, const SurfaceFields& fields, const TestFunction& v) {
    require_same_size(patch, v.values);
    fields.require_regular();
    std::vector<double> L(v.values.size());
    for (std::size_t k = 0; k < L.size(); ++k) {
        const auto& d = fields.nodes[k];
        L[k] = (v.z_second[k] + 2.0 * d.NT * d.BZS * v.z_derivative[k] / d.Nh_norm + potential(patch, d) * v.values[k]) /
               d.Nh_norm;
    }
    return L;
}

std::vector<double> closed_form_L_Nh(const SurfacePatch& patch, const SurfaceFields& fields) {
    fields.require_regular();
    const double K = patch.space.kappa();
    std::vector<double> L(fields.nodes.size());
    for (std::size_t k = 0; k < L.size(); ++k) {
        const auto& d = fields.nodes[k];
        L[k] = 4.0 * (d.BZS / (d.Nh_norm * d.Nh_norm) + d.H * d.H + K - 1.0);
    }
    return L;
}

IbpResiduals ibp_residuals(const SurfacePatch& patch, const SurfaceFields& fields, const TestFunction& u,
                           const TestFunction& v) {
    require_collar(patch, u.support_box);
    IbpResiduals r;
    if (u.support_box.empty()) return r;
    const auto w = area_weights(patch, fields);
    const auto Lv = stability_operator(patch, fields, v);
    std::vector<double> uLv(u.values.size()), t2(u.values.size());
    for (std::size_t k = 0; k < uLv.size(); ++k) {
        const auto& d = fields.nodes[k];
        uLv[k] = u.values[k] * Lv[k];
        t2[k] = d.Nh_norm * u.z_derivative[k] * v.z_derivative[k] +
                d.Nh_norm * u.values[k] * v.z_second[k] + 2.0 * d.NT * u.values[k] * v.z_derivative[k];
    }
    r.r1 = index_form(patch, fields, u, v) + sum_weighted(w, uLv);
    r.r2 = sum_weighted(w, t2);
    return r;
}

Discriminant discriminant_check(const SurfacePatch& patch, const SurfaceFields& fields) {
    fields.require_regular();
    const double K = patch.space.kappa();
    const double hk = patch.H_target * patch.H_target + K;
    if (hk < -1e-12) {
        std::ostringstream os;
        os << "discriminant identities need H^2 + K >= 0, got " << hk;
        throw WrongBranch(os.str());
    }
    const auto L = closed_form_L_Nh(patch, fields);
    Discriminant out;
    out.branch = std::abs(hk) < 1e-12 ? 1 : 2;
    out.lhs.resize(L.size());
    out.rhs.resize(L.size());
    for (std::size_t k = 0; k < L.size(); ++k) {
        const auto& d = fields.nodes[k];
        const double n = d.Nh_norm, n2 = n * n;
        const double core = d.BZS + d.NT * d.NT - n2;
        if (out.branch == 1) {
            const double a = -core / n, b = -2.0 * d.NT, c = -n;
            out.lhs[k] = b * b - 4.0 * a * c;
            // L with H^2 + K at its exact value 0 rather than the node's computed H
            out.rhs[k] = -n2 * (L[k] - 4.0 * (d.H * d.H + K));
        } else {
            const double mu = 4.0 * (d.H * d.H + K);
            const double a = -2.0 * d.NT, b = -2.0 / std::sqrt(mu) * core / n, dd = std::sqrt(mu) * n;
            out.lhs[k] = dd * dd - 2.0 * dd * b - a * a;
            out.rhs[k] = n2 * L[k];
        }
    }
    return out;
}

SecondVariationCheck second_variation_fd_check(const SurfacePatch& patch, const SurfaceFields& fields,
                                               const TestFunction& u, double h_fd) {
    SecondVariationCheck out;
    if (u.support_box.empty()) return out;
    if (!(h_fd > 0.0)) throw ValidationError("h_fd must be positive");
    VariationSpec spec;
    spec.u = u.values;
    spec.s_values = {-h_fd, 0.0, h_fd};
    const auto vals = normal_variation_functionals(patch, fields, spec);
    const double H = patch.H_target;
    auto F = [&](const VariationValue& v) { return v.area + 2.0 * H * v.volume; };
    out.fd_value = (F(vals[0]) - 2.0 * F(vals[1]) + F(vals[2])) / (h_fd * h_fd);
    out.Q_value = index_form(patch, fields, u, u);
    return out;
}

double certificate_phi(double x) { return lobe_a(x) - lobe_ratio() * lobe_b(x); }

const char* to_string(CertificateOutcome o) {
    switch (o) {
        case CertificateOutcome::certificate: return "certificate";
        case CertificateOutcome::vertical_degenerate: return "vertical_degenerate";
        default: return "none_at_scale";
    }
}

StabilityReport instability_certificate(const SurfacePatch& patch, const SurfaceFields& fields,
                                        const CertificateOptions& opts) {
    fields.require_regular();
    const long ne = patch.ne(), ns = patch.ns();
    if (ne < 9 || ns < 9) throw ValidationError("patch too small for the certificate search");
    if (opts.max_n < 1 || !(opts.s_scale > 0.0)) throw ValidationError("max_n >= 1 and s_scale > 0 required");

    StabilityReport rep;
    rep.kappa = patch.space.kappa();
    rep.H = patch.H_target;
    rep.HsqPlusK = rep.H * rep.H + rep.kappa;
    rep.area = sr_area(patch, fields);
    rep.L_Nh_field = closed_form_L_Nh(patch, fields);
    const auto [lo, hi] = std::minmax_element(rep.L_Nh_field.begin(), rep.L_Nh_field.end());
    rep.min_L_Nh = *lo;
    rep.max_L_Nh = *hi;
    if (rep.HsqPlusK >= -1e-12) {
        const auto disc = discriminant_check(patch, fields);
        rep.discriminant_field = disc.lhs;
        for (std::size_t k = 0; k < disc.lhs.size(); ++k) {
            rep.discriminant_residual = std::max(rep.discriminant_residual, std::abs(disc.lhs[k] - disc.rhs[k]));
        }
    }
    if (patch.closed_s) {
        const auto one = make_test_function(patch, fields, std::vector<double>(patch.size(), 1.0));
        rep.Q_u1 = index_form(patch, fields, one, one);
    }

    // eps factor: phi on the interior, rescaled so its trapezoid integral vanishes
    const auto we = trapezoid_weights(ne, patch.eps_step(), false);
    const double ce = 0.5 * (patch.eps[2] + patch.eps[ne - 3]), re = 0.5 * (patch.eps[ne - 3] - patch.eps[2]);
    std::vector<double> a(ne), b(ne);
    for (long i = 0; i < ne; ++i) {
        const double x = (patch.eps[i] - ce) / re;
        a[i] = we[i] * lobe_a(x);
        b[i] = we[i] * lobe_b(x);
    }
    const double c = pairwise_sum(a) / pairwise_sum(b);
    std::vector<double> phi_e(ne);
    for (long i = 0; i < ne; ++i) {
        const double x = (patch.eps[i] - ce) / re;
        phi_e[i] = lobe_a(x) - c * lobe_b(x);
    }

    const double cs = 0.5 * (patch.s[2] + patch.s[ns - 3]);
    const double room = 0.5 * (patch.s[ns - 3] - patch.s[2]);
    for (long n = 1; n <= opts.max_n; n *= 2) {
        if (!patch.closed_s && n * opts.s_scale > room) break;
        std::vector<double> ubar(static_cast<std::size_t>(patch.size()), 0.0);
        for (long i = 0; i < ne; ++i) {
            for (long j = 0; j < ns; ++j) {
                const double fs =
                    patch.closed_s ? certificate_phi(0.0) : certificate_phi((patch.s[j] - cs) / (n * opts.s_scale));
                const long k = patch.index(i, j);
                const double u = phi_e[i] * fs;
                if (u == 0.0) continue;
                ubar[k] = u * fields.nodes[k].Nh_norm / std::abs(patch.V_field[k][2]);
            }
        }
        auto tf = make_test_function(patch, fields, std::move(ubar));
        std::vector<double> sq(tf.values.size());
        for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = tf.values[k] * tf.values[k];
        const double norm2 = surface_integral(patch, fields, sq);
        const double Q = index_form(patch, fields, tf, tf);
        rep.trials.emplace_back(n, Q / norm2);
        rep.max_n_tried = n;
        if (Q < -opts.threshold * norm2) {
            Certificate cert;
            cert.n = n;
            cert.Q_value = Q;
            cert.norm2 = norm2;
            cert.mean_residual = tf.mean;
            cert.u = std::move(tf);
            rep.certificate = std::move(cert);
            rep.outcome = CertificateOutcome::certificate;
            return rep;
        }
        // on closed rulings the s-factor does not depend on n
        if (patch.closed_s) break;
    }
    const double Lmax = std::max(std::abs(rep.min_L_Nh), std::abs(rep.max_L_Nh));
    rep.outcome = std::abs(rep.HsqPlusK) < 1e-12 && Lmax < kVerticalTol ? CertificateOutcome::vertical_degenerate
                                                               : CertificateOutcome::none_at_scale;
    return rep;
}

}  // namespace subrlab
