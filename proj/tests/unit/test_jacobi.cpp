#include <gtest/gtest.h>

#include <cmath>

#include "subrlab/errors.hpp"
#include "subrlab/jacobi.hpp"
#include "subrlab/numerics.hpp"

using namespace subrlab;

namespace {

GeodesicTrace geodesic(const ModelSpace& m, double lambda, double s_max, Vec4 start, Vec3 dir = Vec3::UnitX()) {
    GeodesicSpec spec;
    spec.start = start;
    spec.direction = dir;
    spec.lambda = lambda;
    spec.s_max = s_max;
    return integrate_geodesic(m, spec);
}

Vec4 base_point(int k) { return k == 1 ? Vec4(0.5, 0.5, -0.5, 0.5) : Vec4(0.1, -0.05, 0.2, 0); }

// generic admissible data at s = 0
JacobiState generic_state(const Vec3& w) {
    JacobiState st;
    st.V = Vec3(0.3, -0.7, 0.9);
    st.Vprime = admissible_vprime(w, st.V, 0.4);
    return st;
}

// alpha through p with coordinate velocity d and direction angle theta0 + beta eps
AlphaCurve straight_alpha(const ModelSpace& m, const Vec4& p, const Vec4& d, double theta0, double beta) {
    AlphaCurve a;
    a.point = [&m, p, d](double e) { return m.retract(p + e * d); };
    a.velocity = [&m, p, d](double e) {
        const Vec4 q = p + e * d;
        if (m.kappa() != 1) return d;
        // derivative of q/|q|
        const double n = q.norm();
        return Vec4(d / n - q * q.dot(d) / (n * n * n));
    };
    a.angle = [theta0, beta](double e) { return theta0 + beta * e; };
    a.angle_rate = [beta](double) { return beta; };
    return a;
}

}  // namespace

TEST(ClosedForm, PolynomialBranch) {
    const auto cf = vertical_closed_form(0.0, 3.0, 2.0, 2.0 * 0.5);
    EXPECT_EQ(cf.branch, VerticalClosedForm::Branch::polynomial);
    EXPECT_NEAR(cf(2.0), 0.5 * 4 + 2 * 2 + 3, 1e-14);
}

TEST(ClosedForm, TrigonometricBranch) {
    const auto cf = vertical_closed_form(4.0, 0.0, 1.0, 0.0);
    for (double s : {0.1, 1.0, 3.0}) EXPECT_NEAR(cf(s), std::sin(2 * s) / 2, 1e-14);
}

TEST(ClosedForm, HyperbolicBranch) {
    const auto cf = vertical_closed_form(-4.0, 0.0, 1.0, 0.0);
    for (double s : {0.1, 1.0, 3.0}) EXPECT_NEAR(cf(s), std::sinh(2 * s) / 2, 1e-12);
}

TEST(ClosedForm, ReproducesInitialData) {
    for (double mu : {-3.0, 0.0, 1e-13, 2.5}) {
        const auto cf = vertical_closed_form(mu, 0.7, -0.2, 1.3);
        EXPECT_NEAR(cf(0), 0.7, 1e-14);
        EXPECT_NEAR(cf.d1(0), -0.2, 1e-14);
        EXPECT_NEAR(cf.d2(0), 1.3, 1e-14);
    }
}

TEST(Jacobi, ZeroDataStaysZero) {
    ModelSpace m(0);
    const auto tr = integrate_jacobi(m, geodesic(m, 0.5, 3.0, Vec4::Zero()), JacobiState{});
    for (const auto& st : tr.states) EXPECT_EQ(st.V.norm() + st.Vprime.norm(), 0.0);
}

TEST(Jacobi, VelocityFieldIsJacobi) {
    for (int k : {-1, 0, 1}) {
        ModelSpace m(k);
        const double lam = 0.7;
        const auto g = geodesic(m, lam, 5.0, base_point(k));
        JacobiState st;
        st.V = g.samples[0].velocity;
        st.Vprime = -2 * lam * j_rotate(st.V);
        const auto tr = integrate_jacobi(m, g, st);
        for (std::size_t i = 0; i < g.samples.size(); ++i) {
            EXPECT_LT((tr.states[i].V - g.samples[i].velocity).norm(), 1e-9);
        }
        // residual of the equation with V = gamma' against its exact component derivatives
        Vec3 dv, dp;
        const Vec3 w = g.samples[10].velocity;
        jacobi_rhs(k, lam, w, w, -2 * lam * j_rotate(w), dv, dp);
        EXPECT_LT((dv + 2 * lam * j_rotate(w)).norm(), 1e-12);
        EXPECT_LT((dp + 4 * lam * lam * w).norm(), 1e-12);
    }
}

TEST(Jacobi, MisalignedInitialStateRejected) {
    ModelSpace m(0);
    JacobiState st;
    st.s = 0.5;
    EXPECT_THROW(integrate_jacobi(m, geodesic(m, 0.0, 1.0, Vec4::Zero()), st), MisalignedBase);
}

class JacobiCases : public ::testing::TestWithParam<std::pair<int, double>> {};

TEST_P(JacobiCases, VerticalComponentMatchesClosedForm) {
    const auto [k, lam] = GetParam();
    ModelSpace m(k);
    const auto g = geodesic(m, lam, 10.0, base_point(k), Vec3(0.6, 0.8, 0));
    const Vec3 w0 = g.samples[0].velocity;
    const JacobiState st = generic_state(w0);
    const auto tr = integrate_jacobi(m, g, st);
    const auto cf = vertical_closed_form(tr.mu, st.V[2], vertical_d1(w0, st), vertical_d2(lam, w0, st));
    double worst = 0.0, scale = 1.0;
    for (const auto& s : tr.states) {
        worst = std::max(worst, std::abs(s.V[2] - cf(s.s)));
        scale = std::max(scale, std::abs(s.V[2]));
    }
    // strongly growing solutions are compared relative to their size
    EXPECT_LT(worst / scale, 1e-6);
    EXPECT_LT(tr.conserved_drift() / scale, 1e-8);

    // f' = 2 <V, J gamma'> pointwise and f''' + mu f' = 0 by differencing
    const auto f = tr.vertical();
    const long n = static_cast<long>(f.size());
    for (long i = 2; i < n - 2; i += 97) {
        const double d1 = fd_first<double>([&](long j) { return f[j]; }, i, n, g.step);
        EXPECT_NEAR(d1, vertical_d1(g.samples[i].velocity, tr.states[i]), 1e-6 * scale);
    }
    std::vector<double> fp(f.size());
    for (long i = 0; i < n; ++i) fp[i] = vertical_d1(g.samples[i].velocity, tr.states[i]);
    for (long i = 2; i < n - 2; i += 97) {
        const double d3 = fd_second<double>([&](long j) { return fp[j]; }, i, n, g.step);
        EXPECT_NEAR(d3 + tr.mu * fp[i], 0.0, 1e-5 * scale);
    }
}

INSTANTIATE_TEST_SUITE_P(MuSigns, JacobiCases,
                         ::testing::Values(std::make_pair(-1, 0.0), std::make_pair(-1, 0.3), std::make_pair(-1, 0.9),
                                           std::make_pair(0, 0.0),
                                           std::make_pair(-1, 1.0), std::make_pair(0, 0.8), std::make_pair(1, 0.0),
                                           std::make_pair(1, 1.5)));

TEST(Family, ConstantAlphaGivesZeroField) {
    ModelSpace m(0);
    const auto alpha = straight_alpha(m, Vec4::Zero(), Vec4::Zero(), 0.3, 0.0);
    for (const auto& smp : family_oracle(m, alpha, 0.5, 1e-4, 2.0)) EXPECT_LT(smp.V.norm(), 1e-12);
}

TEST(Family, ReebTranslationsGiveT) {
    ModelSpace m(0);
    const auto alpha = straight_alpha(m, Vec4::Zero(), Vec4(0, 0, 1, 0), 0.0, 0.0);
    const auto fam = family_oracle(m, alpha, 0.5, 1e-4, 5.0);
    const auto g = geodesic(m, 0.5, 5.0, Vec4::Zero());
    JacobiState st;
    st.V = Vec3::UnitZ();
    st.Vprime = ConnectionTable{0}.gamma(g.samples[0].velocity, st.V);
    const auto tr = integrate_jacobi(m, g, st);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        EXPECT_LT((fam[i].V - Vec3::UnitZ()).norm(), 1e-8);
        EXPECT_LT((fam[i].V - tr.states[i].V).norm(), 1e-4);
    }
}

TEST(Family, VerticalPlaneRulingIsLinear) {
    // rulings of the plane y = 0 in M(0) started along the integral curve of S = -T
    ModelSpace m(0);
    const auto alpha = straight_alpha(m, Vec4::Zero(), Vec4(0, 0, -1, 0), 0.0, 0.0);
    const auto fam = family_oracle(m, alpha, 0.0, 1e-4, 4.0);
    const double f0 = fam.front().V[2];
    const double f1 = (fam[1].V[2] - fam[0].V[2]) / 1e-3;
    for (const auto& smp : fam) EXPECT_NEAR(smp.V[2], f0 + f1 * smp.s, 1e-8);
}

class FamilyCases : public ::testing::TestWithParam<int> {};

TEST_P(FamilyCases, OracleMatchesIntegrator) {
    const int k = GetParam();
    ModelSpace m(k);
    const Vec4 p = base_point(k);
    const Vec4 d = k == 1 ? Vec4(0.3, -0.2, 0.1, 0.4) : Vec4(0.3, -0.2, 0.7, 0);
    const auto alpha = straight_alpha(m, p, d, 0.4, 0.9);
    const double lam = 0.6;
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
    EXPECT_LT(worst, 1e-4);
    EXPECT_LT(tr.conserved_drift(), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Kappa, FamilyCases, ::testing::Values(-1, 0, 1));
