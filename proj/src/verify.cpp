#include "subrlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <json.hpp>
#include <random>

#include "subrlab/errors.hpp"
#include "subrlab/io.hpp"
#include "subrlab/numerics.hpp"
#include "subrlab/stability.hpp"

namespace subrlab {

namespace {

using Clock = std::chrono::steady_clock;

class Recorder {
public:
    Recorder(std::vector<CheckResult>& out, std::string suite, double scale)
        : out_(out), suite_(std::move(suite)), scale_(scale), t0_(Clock::now()) {}

    void add(const std::string& name, int criterion, double residual, const std::string& key) {
        const Tolerance& t = tolerance_table().at(key);
        CheckResult r;
        r.suite = suite_;
        r.name = name;
        r.criterion = criterion;
        r.residual = residual;
        r.tolerance = t.fixed ? t.base : std::max(t.base * scale_, t.floor);
        r.pass = std::isfinite(residual) && residual <= r.tolerance;
        const auto now = Clock::now();
        r.seconds = std::chrono::duration<double>(now - t0_).count();
        t0_ = now;
        out_.push_back(r);
    }
    void flag(const std::string& name, int criterion, bool ok) { add(name, criterion, ok ? 0.0 : 1.0, "flag"); }
    // errors inside a check become a failed check instead of aborting the suite
    void guard(const std::string& name, int criterion, const std::function<void()>& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            add(name + " [" + e.what() + "]", criterion, std::numeric_limits<double>::infinity(), "flag");
        }
    }

private:
    std::vector<CheckResult>& out_;
    std::string suite_;
    double scale_;
    Clock::time_point t0_;
};

std::string kname(int k) { return k < 0 ? "m1" : (k == 0 ? "0" : "1"); }

Vec4 random_point(const ModelSpace& m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    if (m.kappa() == 1) return Vec4(u(rng), u(rng), u(rng), u(rng)).normalized();
    double x, y;
    do {
        x = u(rng);
        y = u(rng);
    } while (m.kappa() == -1 && x * x + y * y > 0.81);
    const double scale = m.kappa() == 0 ? 3.0 : 1.0;
    return Vec4(scale * x, scale * y, 4.0 * u(rng), 0.0);
}

Vec3 random_vec(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return Vec3(g(rng), g(rng), g(rng));
}

Vec4 base_point(int k) { return k == 1 ? Vec4(0.5, 0.5, -0.5, 0.5) : Vec4(0.1, -0.05, 0.2, 0); }

GeodesicTrace geodesic(const ModelSpace& m, double lambda, double s_min, double s_max, double step = 1e-3,
                       Vec4 start = Vec4::Zero(), Vec3 dir = Vec3::UnitX()) {
    GeodesicSpec spec;
    spec.start = m.kappa() == 1 && start.norm() == 0.0 ? Vec4(1, 0, 0, 0) : start;
    spec.direction = dir;
    spec.lambda = lambda;
    spec.s_min = s_min;
    spec.s_max = s_max;
    spec.step = step;
    return integrate_geodesic(m, spec);
}

// ----------------------------------------------------------------------------

void suite_frames(Recorder& rec, const VerifyOptions& o) {
    for (int k : {-1, 0, 1}) {
        const ModelSpace m(k);
        std::mt19937_64 rng(o.seed + 101 * static_cast<unsigned long>(k + 1));
        double br = 0, orth = 0, cont = 0, kos = 0;
        const ConnectionTable tab{k};
        for (int n = 0; n < 100; ++n) {
            const Vec4 p = random_point(m, rng);
            br = std::max({br, (m.bracket(kX, kY, p) - Vec3(0, 0, -2)).norm(),
                           (m.bracket(kX, kT, p) - Vec3(0, 2.0 * k, 0)).norm(),
                           (m.bracket(kY, kT, p) - Vec3(-2.0 * k, 0, 0)).norm()});
            const Frame f = m.frame_at(p);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) orth = std::max(orth, std::abs(m.coord_metric(p, f[i], f[j]) - (i == j)));
                cont = std::max(cont, std::abs(m.eta(p, f[i]) - (i == kT)));
            }
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    for (int l = 0; l < 3; ++l) {
                        auto c = [&](int a, int b, int d) { return m.bracket(a, b, p)[d]; };
                        const double kz = 0.5 * (c(i, j, l) - c(j, l, i) + c(l, i, j));
                        kos = std::max(kos, std::abs(tab(i, j, l) - kz));
                    }
                }
            }
        }
        rec.add("brackets.k" + kname(k), 1, br, "brackets");
        rec.add("orthonormal.k" + kname(k), 1, orth, "orthonormal");
        rec.add("contact.k" + kname(k), 1, cont, "contact");
        rec.add("koszul.k" + kname(k), 1, kos, "koszul");

        double ruvu = 0, ric = 0;
        for (int n = 0; n < 100; ++n) {
            Vec3 u = random_vec(rng);
            u[2] = 0.0;
            const Vec3 v = random_vec(rng);
            const Vec3 ju = j_rotate(u);
            const Vec3 expect = (4.0 * k - 3.0) * v.dot(ju) * ju + u.squaredNorm() * v[2] * Vec3::UnitZ();
            ruvu = std::max(ruvu, (curvature(k, u, v, u) - expect).norm());
            const Vec3 vh(v[0], v[1], 0.0);
            ric = std::max(ric, std::abs(ricci(k, v) - ((4.0 * k - 2.0) * vh.squaredNorm() + 2.0 * v[2] * v[2])));
        }
        rec.add("curvature_ruvu.k" + kname(k), 2, ruvu, "curvature");
        rec.add("ricci.k" + kname(k), 2, ric, "ricci");
    }
}

// ----------------------------------------------------------------------------

void suite_geodesics(Recorder& rec, const VerifyOptions& o) {
    for (int k : {-1, 0, 1}) {
        rec.guard("drift.k" + kname(k), 3, [&] {
            const ModelSpace m(k);
            double worst = 0;
            for (double lam : {0.0, 0.5, 1.0, 2.0}) {
                // the disk chart only holds about 14 units of distance from the centre, so in M(-1)
                // start 10 units before the origin and cross it
                Vec4 start = Vec4::Zero();
                Vec3 dir = Vec3::UnitX();
                if (k == -1) {
                    const auto back = geodesic(m, lam, -10, 0);
                    start = back.samples.front().point;
                    dir = back.samples.front().velocity;
                }
                const auto tr = geodesic(m, lam, 0, 20, 1e-3, start, dir);
                worst = std::max(worst, tr.drift.max());
            }
            rec.add("drift.k" + kname(k), 3, worst, "drift");
        });
    }
    rec.guard("helix_endpoint", 3, [&] {
        const ModelSpace m(0);
        double worst = 0;
        struct HelixCase {
            double lambda, s;
            Vec3 end;
        };
        std::vector<HelixCase> cases;
        if (!o.helix_fixture.empty()) {
            std::ifstream in(o.helix_fixture);
            if (!in) throw ValidationError("cannot open " + o.helix_fixture);
            const auto doc = nlohmann::json::parse(in);
            for (const auto& c : doc.at("cases")) {
                const auto& e = c.at("endpoint");
                cases.push_back({c.at("lambda").get<double>(), c.at("s").get<double>(),
                                 Vec3(e[0].get<double>(), e[1].get<double>(), e[2].get<double>())});
            }
        } else {
            for (auto [lam, s] : {std::pair{0.5, M_PI}, {0.5, 20.0}, {1.0, 3.0}, {2.0, 20.0}, {0.3, 7.0}}) {
                const double th = 2 * lam * s;
                cases.push_back({lam, s,
                                 Vec3(std::sin(th) / (2 * lam), (std::cos(th) - 1) / (2 * lam),
                                      (th - std::sin(th)) / (4 * lam * lam))});
            }
        }
        for (const auto& c : cases) {
            const double n = std::ceil(c.s / 1e-3);
            const auto tr = geodesic(m, c.lambda, 0, c.s, c.s / n);
            worst = std::max(worst, (tr.samples.back().point.head<3>() - c.end).cwiseAbs().maxCoeff());
        }
        rec.add(o.helix_fixture.empty() ? "helix_endpoint" : "helix_endpoint_symbolic", 3, worst, "helix");
    });
    rec.guard("projection_curvature", 3, [&] {
        double worst = 0;
        for (double lam : {0.0, 0.5, 1.0, 2.0}) {
            const ModelSpace m0(0), m1(1), mm(-1);
            worst = std::max(worst, std::abs(projection_curvature(m0, geodesic(m0, lam, 0, 10)) - 2 * lam));
            worst = std::max(worst, std::abs(projection_curvature(m1, geodesic(m1, lam, 0, 10)) - 2 * lam));
            worst = std::max(worst, std::abs(projection_curvature(mm, geodesic(mm, lam, -3, 3)) - 2 * lam));
        }
        rec.add("projection_curvature", 3, worst, "projection_curvature");
    });
    rec.guard("great_circle_period", 0, [&] {
        const ModelSpace m(1);
        const auto res = classify_completeness(m, geodesic(m, 0.0, 0, 4 * M_PI + 0.5));
        rec.add("great_circle_period", 0, res.kind == Completeness::closed ? std::abs(res.period - 2 * M_PI) : 1.0,
                "period");
    });
}

// ----------------------------------------------------------------------------

void suite_jacobi(Recorder& rec, const VerifyOptions&) {
    struct Case {
        const char* name;
        int k;
        double lam;
    };
    for (const Case c : {Case{"mu_neg", -1, 0.9}, Case{"mu_zero", 0, 0.0}, Case{"mu_pos", 1, 1.5},
                         Case{"mu_pos_heis", 0, 0.8}}) {
        rec.guard(std::string("closed_form.") + c.name, 4, [&] {
            const ModelSpace m(c.k);
            const auto g = geodesic(m, c.lam, 0, 10, 1e-3, base_point(c.k), Vec3(0.6, 0.8, 0));
            const Vec3 w0 = g.samples[0].velocity;
            JacobiState st;
            st.V = Vec3(0.3, -0.7, 0.9);
            st.Vprime = admissible_vprime(w0, st.V, 0.4);
            const auto tr = integrate_jacobi(m, g, st);
            const auto cf = vertical_closed_form(tr.mu, st.V[2], vertical_d1(w0, st), vertical_d2(c.lam, w0, st));
            double worst = 0;
            for (const auto& s : tr.states) worst = std::max(worst, std::abs(s.V[2] - cf(s.s)));
            rec.add(std::string("closed_form.") + c.name, 4, worst, "jacobi_closed_form");
            rec.add(std::string("conserved.") + c.name, 4, tr.conserved_drift(), "jacobi_conserved");
        });
    }
    for (int k : {-1, 0, 1}) {
        rec.guard("family_oracle.k" + kname(k), 4, [&] {
            const ModelSpace m(k);
            const Vec4 p = k == 1 ? Vec4(0.5, 0.5, -0.5, 0.5) : Vec4(0.1, -0.05, 0.2, 0);
            const AlphaCurve alpha = fiber_alpha(m, p, 0.4, 0.9);
            // lambda 0.6 in M(-1) grows like e^{9.6} by s = 6, past what a 1e-4 absolute match can resolve
            const double lam = k == -1 ? 0.9 : 0.6;
            const auto fam = family_oracle(m, alpha, lam, 1e-4, 6.0);
            GeodesicSpec spec;
            spec.start = alpha.point(0);
            spec.direction = alpha.direction(0);
            spec.lambda = lam;
            spec.s_max = 6.0;
            const auto g = integrate_geodesic(m, spec);
            const auto tr = integrate_jacobi(m, g, alpha_initial_state(m, alpha));
            double worst = 0;
            for (std::size_t i = 0; i < fam.size(); ++i) worst = std::max(worst, (fam[i].V - tr.states[i].V).norm());
            rec.add("family_oracle.k" + kname(k), 4, worst, "family_oracle");
        });
    }
}

// ----------------------------------------------------------------------------

SurfacePatch ruled_m0(double H, long ne = 201, double s_half = 3.0, double s_step = 0.003, double twist = 0.7) {
    const ModelSpace m(0);
    return build_ruled_surface(m, fiber_alpha(m, Vec4::Zero(), 0.0, twist), H, {-1.0, 1.0, ne}, -s_half, s_half,
                               s_step);
}

SurfacePatch cylinder(int k, double lam, double s_half, double s_step, double fiber, long nf) {
    const ModelSpace m(k);
    return build_vertical_cylinder(m, geodesic(m, lam, -s_half, s_half, s_step), {0.0, fiber, nf});
}

SurfacePatch clifford(long ne = 201, long ns = 1000) {
    const ModelSpace m(1);
    GeodesicSpec c;
    c.start = Vec4(1, 0, 1, 0) / std::sqrt(2.0);
    c.direction = Vec3(0, 1, 0);
    c.step = 2 * M_PI / static_cast<double>(ns);
    c.s_max = c.step * (static_cast<double>(ns) - 0.5);
    return build_vertical_cylinder(m, integrate_geodesic(m, c), {0.0, M_PI, ne}, true);
}

struct IdentityResiduals {
    double relations = 0, H = 0, znh = 0, znt = 0, zbzs = 0, dzz = 0;
};

IdentityResiduals identities(const SurfacePatch& P, const SurfaceFields& F) {
    IdentityResiduals r;
    const long ne = P.ne(), ns = P.ns();
    const double K = P.space.kappa();
    const ConnectionTable g{P.space.kappa()};
    const Vec3 T(0, 0, 1);
    for (long i = 2; i < ne - 2; ++i) {
        for (long j = 2; j < ns - 2; ++j) {
            const long k = P.index(i, j);
            const auto& d = F.nodes[k];
            auto tangential = [&](const Vec3& v) { return Vec3(v - v.dot(d.N) * d.N); };
            r.relations = std::max({r.relations, std::abs(d.Nh_norm * d.Nh_norm + d.NT * d.NT - 1.0),
                                    (tangential(d.nu_h) - d.NT * d.S).norm(),
                                    (tangential(T) + d.Nh_norm * d.S).norm()});
            r.H = std::max(r.H, std::abs(d.H - P.H_target));
            auto ds = [&](auto get) {
                return fd_first<double>([&](long jj) { return get(F.nodes[P.index(i, jj)]); }, j, ns, P.s_step(),
                                        P.closed_s);
            };
            const double dnh = ds([](const SurfacePointData& x) { return x.Nh_norm; });
            const double dnt = ds([](const SurfacePointData& x) { return x.NT; });
            const double dbzs = ds([](const SurfacePointData& x) { return x.BZS; });
            r.znh = std::max(r.znh, std::abs(dnh - d.NT * (1 - d.BZS)));
            r.znt = std::max(r.znt, std::abs(dnt - d.Nh_norm * (d.BZS - 1)));
            const double rhs =
                4 * d.Nh_norm * d.NT * (1 - K - d.H * d.H) - 2 / d.Nh_norm * d.NT * d.BZS * (1 + d.BZS);
            r.zbzs = std::max(r.zbzs, std::abs(dbzs - rhs));
            const Vec3 dz = fd_first<Vec3>([&](long jj) { return F.nodes[P.index(i, jj)].Z; }, j, ns, P.s_step(),
                                           P.closed_s);
            r.dzz = std::max(r.dzz, (dz + g.gamma(d.Z, d.Z) - 2 * d.H * d.nu_h).norm());
        }
    }
    return r;
}

void suite_surfaces(Recorder& rec, const VerifyOptions&) {
    struct Named {
        const char* name;
        double H;
    };
    for (const Named c : {Named{"minimal_ruled", 0.0}, Named{"cmc_0.5", 0.5}}) {
        rec.guard(std::string("identities.") + c.name, 5, [&] {
            const auto P = ruled_m0(c.H);
            const auto F = compute_fields(P);
            F.require_regular();
            const auto r = identities(P, F);
            const std::string n = c.name;
            rec.add("relations." + n, 5, r.relations, "relations");
            rec.add("H_constancy." + n, 5, r.H, "H_constancy");
            rec.add("dzz." + n, 5, r.dzz, "dzz");
            rec.add("znh." + n, 5, r.znh, "z_derivatives");
            rec.add("znt." + n, 5, r.znt, "z_derivatives");
            rec.add("zbzs." + n, 5, r.zbzs, "zbzs");
        });
    }
    struct Cyl {
        const char* name;
        int k;
        double lam;
    };
    for (const Cyl c : {Cyl{"vertical_plane", 0, 0.0}, Cyl{"horocylinder", -1, 1.0}, Cyl{"circle_cylinder", 0, 1.0},
                        Cyl{"sphere_cylinder", 1, 0.7}}) {
        rec.guard(std::string("vertical.") + c.name, 5, [&] {
            const auto P = cylinder(c.k, c.lam, 2.0, 0.002, 1.0, 101);
            const auto F = compute_fields(P);
            F.require_regular();
            double worst = 0;
            for (const auto& d : F.nodes) {
                worst = std::max({worst, std::abs(d.NT), std::abs(d.BZS - 1.0), std::abs(d.H - c.lam)});
            }
            rec.add(std::string("vertical.") + c.name, 5, worst, "vertical");
        });
    }
    rec.guard("area.vertical_plane_unit", 0, [&] {
        const auto P = cylinder(0, 0.0, 0.5, 0.01, 1.0, 11);
        rec.add("area.vertical_plane_unit", 0, std::abs(sr_area(P) - 1.0), "area");
    });
    rec.guard("area.clifford", 0, [&] {
        rec.add("area.clifford", 0, std::abs(sr_area(clifford(101, 400)) - 2 * M_PI * M_PI), "area");
    });
}

// ----------------------------------------------------------------------------

double l2norm(const SurfacePatch& P, const SurfaceFields& F, const std::vector<double>& u) {
    std::vector<double> sq(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) sq[k] = u[k] * u[k];
    return std::sqrt(surface_integral(P, F, sq));
}

double ibp_ratio(const SurfacePatch& P, const SurfaceFields& F) {
    const auto u = make_test_function(P, F, variation_bump(P, nlohmann::json()));
    const auto r = ibp_residuals(P, F, u, u);
    const double n2 = std::pow(l2norm(P, F, u.values), 2);
    return std::max(std::abs(r.r1), std::abs(r.r2)) / n2;
}

double fd_error(const SurfacePatch& P, double h_fd) {
    const auto F = compute_fields(P);
    const auto u = make_test_function(P, F, variation_bump(P, nlohmann::json()));
    const auto r = second_variation_fd_check(P, F, u, h_fd);
    return std::abs(r.fd_value - r.Q_value) / std::abs(r.Q_value);
}

void suite_stability(Recorder& rec, const VerifyOptions&) {
    for (double H : {0.0, 0.5}) {
        const std::string n = H == 0.0 ? "minimal_ruled" : "cmc_0.5";
        rec.guard("L_cross." + n, 6, [&] {
            const auto P = ruled_m0(H);
            const auto F = compute_fields(P);
            std::vector<double> nh(static_cast<std::size_t>(P.size()));
            for (long k = 0; k < P.size(); ++k) nh[k] = F.nodes[k].Nh_norm;
            const auto L = stability_operator(P, F, make_test_function(P, F, nh));
            const auto C = closed_form_L_Nh(P, F);
            double cross = 0, lmin = 0;
            for (long i = 2; i < P.ne() - 2; ++i) {
                for (long j = 2; j < P.ns() - 2; ++j) cross = std::max(cross, std::abs(L[P.index(i, j)] - C[P.index(i, j)]));
            }
            for (double v : C) lmin = std::min(lmin, v);
            const auto D = discriminant_check(P, F);
            double disc = 0;
            for (std::size_t k = 0; k < D.lhs.size(); ++k) disc = std::max(disc, std::abs(D.lhs[k] - D.rhs[k]));
            rec.add("L_cross." + n, 6, cross, "L_cross");
            rec.add("discriminant." + n, 6, disc, "discriminant");
            rec.add("L_nonnegative." + n, 6, -lmin, "L_nonnegative");
        });
    }
    rec.guard("index_form_symmetric", 0, [&] {
        const auto P = ruled_m0(0.5, 41, 3.0, 0.01);
        const auto F = compute_fields(P);
        auto u = variation_bump(P, nlohmann::json());
        auto v = u;
        for (long k = 0; k < P.size(); ++k) v[k] *= std::cos(P.s[k % P.ns()]) + 0.1 * P.eps[k / P.ns()];
        const auto tu = make_test_function(P, F, u), tv = make_test_function(P, F, v);
        rec.add("index_form_symmetric", 0, std::abs(index_form(P, F, tu, tv) - index_form(P, F, tv, tu)), "symmetry");
    });

    // second variation against finite differences of A + 2HV
    struct Cyl {
        const char* name;
        int k;
        double lam;
    };
    for (const Cyl c : {Cyl{"vertical_plane", 0, 0.0}, Cyl{"horocylinder", -1, 1.0}}) {
        rec.guard(std::string("second_variation.") + c.name, 7, [&] {
            // the variation step shrinks with the grid, otherwise it caps the error on exact patches
            const double coarse = fd_error(cylinder(c.k, c.lam, 4.0, 0.04, 2.0, 26), 4e-3);
            const double fine = fd_error(cylinder(c.k, c.lam, 4.0, 0.01, 2.0, 101), 1e-3);
            rec.add(std::string("second_variation.") + c.name, 7, fine, "second_variation");
            rec.add(std::string("second_variation_refines.") + c.name, 7, fine / coarse, "refinement");
        });
    }

    // certificates
    rec.guard("certificate.clifford", 8, [&] {
        const auto P = clifford();
        const auto rep = instability_certificate(P, compute_fields(P));
        rec.flag("certificate.clifford", 8, rep.certificate.has_value() && std::abs(rep.certificate->mean_residual) < 1e-10);
        const double ratio = rep.certificate ? rep.certificate->Q_value / rep.certificate->norm2 : 0.0;
        rec.add("certificate.clifford_coefficient", 8, std::abs(ratio / -4.0 - 1.0), "certificate_coefficient");
    });
    rec.guard("certificate.minimal_ruled", 8, [&] {
        const auto P = ruled_m0(0.0, 41, 70.0, 0.01);
        const auto rep = instability_certificate(P, compute_fields(P));
        rec.flag("certificate.minimal_ruled", 8,
                 rep.certificate && rep.certificate->n <= 64 && std::abs(rep.certificate->mean_residual) < 1e-10);
    });
    for (const Cyl c : {Cyl{"vertical_plane", 0, 0.0}, Cyl{"horocylinder", -1, 1.0}}) {
        rec.guard(std::string("no_certificate.") + c.name, 8, [&] {
            const auto P = cylinder(c.k, c.lam, 10.0, 0.005, 2.0, 41);
            const auto rep = instability_certificate(P, compute_fields(P), {8, 1e-6, 1.0});
            rec.flag(std::string("no_certificate.") + c.name, 8, !rep.certificate.has_value());
            rec.add(std::string("min_L_Nh_zero.") + c.name, 8, std::abs(rep.min_L_Nh), "min_L_Nh");
        });
    }

    // integration by parts
    rec.guard("ibp", 9, [&] {
        double worst = 0;
        for (const SurfacePatch& P : {ruled_m0(0.0, 201, 3.0, 0.003), ruled_m0(0.5, 201, 3.0, 0.003),
                                      cylinder(-1, 1.0, 4.0, 0.01, 2.0, 101)}) {
            worst = std::max(worst, ibp_ratio(P, compute_fields(P)));
        }
        rec.add("ibp.default_grids", 9, worst, "ibp");
        const auto c = ruled_m0(0.5, 41, 3.0, 0.1), f = ruled_m0(0.5, 41, 3.0, 0.05);
        rec.add("ibp.second_order_decay", 9, ibp_ratio(f, compute_fields(f)) / ibp_ratio(c, compute_fields(c)),
                "decay_order2");
    });
}

struct Suite {
    const char* name;
    void (*run)(Recorder&, const VerifyOptions&);
};

const std::vector<Suite>& registry() {
    static const std::vector<Suite> r = {{"frames", suite_frames},
                                         {"geodesics", suite_geodesics},
                                         {"jacobi", suite_jacobi},
                                         {"surfaces", suite_surfaces},
                                         {"stability", suite_stability}};
    return r;
}

}  // namespace

const std::map<std::string, Tolerance>& tolerance_table() {
    // base tolerance, floor; fixed entries ignore --tol-scale
    static const std::map<std::string, Tolerance> t = {
        {"brackets", {1e-9, 1e-14}},
        {"orthonormal", {1e-12, 1e-15}},
        {"contact", {1e-12, 1e-15}},
        {"koszul", {1e-9, 1e-14}},
        {"curvature", {1e-9, 1e-14}},
        {"ricci", {1e-9, 1e-14}},
        {"drift", {1e-8, 1e-13}},
        {"helix", {1e-8, 1e-13}},
        {"projection_curvature", {1e-4, 1e-10}},
        {"period", {1e-6, 1e-12}},
        {"jacobi_closed_form", {1e-6, 1e-12}},
        {"jacobi_conserved", {1e-8, 1e-14}},
        {"family_oracle", {1e-4, 1e-10}},
        {"relations", {1e-8, 1e-14}},
        {"H_constancy", {1e-5, 1e-12}},
        {"dzz", {1e-5, 1e-12}},
        {"z_derivatives", {1e-4, 1e-12}},
        {"zbzs", {1e-3, 1e-12}},
        {"vertical", {1e-6, 1e-13}},
        {"area", {1e-10, 1e-15}},
        {"L_cross", {1e-3, 1e-12}},
        {"discriminant", {1e-6, 1e-13}},
        {"L_nonnegative", {1e-6, 1e-13}},
        {"symmetry", {1e-12, 1e-15}},
        {"second_variation", {1e-2, 1e-8}},
        {"certificate_coefficient", {1e-3, 1e-9}},
        {"min_L_Nh", {1e-6, 1e-13}},
        {"ibp", {1e-4, 1e-12}},
        {"refinement", {1.0, 1.0, true}},
        {"decay_order2", {0.25, 0.25, true}},
        {"flag", {0.5, 0.5, true}},
    };
    return t;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& s : registry()) n.push_back(s.name);
        return n;
    }();
    return names;
}

std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opts) {
    if (!(opts.tol_scale > 0.0)) throw ValidationError("tol-scale must be positive");
    std::vector<CheckResult> out;
    bool found = false;
    for (const auto& s : registry()) {
        if (suite != "all" && suite != s.name) continue;
        found = true;
        Recorder rec(out, s.name, opts.tol_scale);
        s.run(rec, opts);
    }
    if (!found) throw ValidationError("unknown suite '" + suite + "'");
    return out;
}

}  // namespace subrlab
