#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "subrlab/errors.hpp"
#include "subrlab/model_space.hpp"
#include "subrlab/numerics.hpp"

using namespace subrlab;

namespace {

Vec4 random_point(const ModelSpace& m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    if (m.kappa() == 1) {
        Vec4 p(u(rng), u(rng), u(rng), u(rng));
        return p.normalized();
    }
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

// Koszul formula for an orthonormal frame with constant structure constants
double koszul(const ModelSpace& m, const Vec4& p, int i, int j, int k) {
    auto c = [&](int a, int b, int d) { return m.bracket(a, b, p)[d]; };
    return 0.5 * (c(i, j, k) - c(j, k, i) + c(k, i, j));
}

}  // namespace

TEST(Frames, OriginOfHeisenberg) {
    ModelSpace m(0);
    const Frame f = m.frame_at(Vec4::Zero());
    EXPECT_TRUE(f.X.isApprox(Vec4(1, 0, 0, 0)));
    EXPECT_TRUE(f.Y.isApprox(Vec4(0, 1, 0, 0)));
    EXPECT_TRUE(f.T.isApprox(Vec4(0, 0, 1, 0)));
}

TEST(Frames, SphereReebField) {
    ModelSpace m(1);
    EXPECT_TRUE(m.frame_at(Vec4(1, 0, 0, 0)).T.isApprox(Vec4(0, 1, 0, 0)));
}

TEST(Frames, HyperbolicXComponent) {
    ModelSpace m(-1);
    EXPECT_NEAR(m.frame_at(Vec4(0.5, 0, 0, 0)).X[0], 0.75, 1e-15);
}

TEST(Frames, OutsideChartRejected) {
    EXPECT_THROW(ModelSpace(-1).frame_at(Vec4(1.2, 0, 0, 0)), ChartDomainViolation);
    EXPECT_THROW(ModelSpace(1).frame_at(Vec4(1.1, 0, 0, 0)), ChartDomainViolation);
    EXPECT_THROW(ModelSpace(2), ValidationError);
}

class PerKappa : public ::testing::TestWithParam<int> {};

TEST_P(PerKappa, BracketsAtRandomPoints) {
    ModelSpace m(GetParam());
    const double k = m.kappa();
    std::mt19937_64 rng(11 + GetParam());
    for (int n = 0; n < 100; ++n) {
        const Vec4 p = random_point(m, rng);
        EXPECT_LT((m.bracket(kX, kY, p) - Vec3(0, 0, -2)).norm(), 1e-9);
        EXPECT_LT((m.bracket(kX, kT, p) - Vec3(0, 2 * k, 0)).norm(), 1e-9);
        EXPECT_LT((m.bracket(kY, kT, p) - Vec3(-2 * k, 0, 0)).norm(), 1e-9);
    }
}

TEST_P(PerKappa, AnalyticJacobianMatchesDifferences) {
    ModelSpace m(GetParam());
    std::mt19937_64 rng(5);
    for (int n = 0; n < 20; ++n) {
        const Vec4 p = random_point(m, rng);
        for (int i = 0; i < 3; ++i) {
            const Mat4 J = m.frame_jacobian(i, p);
            for (int c = 0; c < m.coord_dim(); ++c) {
                const double h = 1e-5;
                const Vec4 e = Vec4::Unit(c);
                const Vec4 d = (m.frame_ambient(p + h * e)[i] - m.frame_ambient(p - h * e)[i]) / (2 * h);
                EXPECT_LT((J.col(c) - d).norm(), 1e-8);
            }
        }
    }
}

TEST_P(PerKappa, FrameIsOrthonormalAndContact) {
    ModelSpace m(GetParam());
    std::mt19937_64 rng(7);
    for (int n = 0; n < 100; ++n) {
        const Vec4 p = random_point(m, rng);
        const Frame f = m.frame_at(p);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                EXPECT_NEAR(m.coord_metric(p, f[i], f[j]), i == j ? 1.0 : 0.0, 1e-12);
            }
            EXPECT_NEAR(m.eta(p, f[i]), i == kT ? 1.0 : 0.0, 1e-12);
        }
        const Vec3 v = random_vec(rng);
        EXPECT_LT((m.to_frame(p, m.from_frame(p, v)) - v).norm(), 1e-12);
    }
}

TEST_P(PerKappa, ConnectionTableMatchesKoszul) {
    ModelSpace m(GetParam());
    const ConnectionTable tab = connection_table(m.kappa());
    std::mt19937_64 rng(3);
    const Vec4 p = random_point(m, rng);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                EXPECT_NEAR(tab(i, j, k), koszul(m, p, i, j, k), 1e-9) << i << j << k;
                EXPECT_EQ(tab(i, j, k), -tab(i, k, j));
            }
}

TEST_P(PerKappa, ReebDerivativeIsJ) {
    const ConnectionTable tab = connection_table(GetParam());
    std::mt19937_64 rng(9);
    for (int i = 0; i < 3; ++i) {
        const Vec3 e = Vec3::Unit(i);
        EXPECT_LT((tab.gamma(e, Vec3::UnitZ()) - j_rotate(e)).norm(), 1e-15);
    }
    const Vec3 u = random_vec(rng);
    EXPECT_LT((tab.gamma(u, Vec3::UnitZ()) - j_rotate(u)).norm(), 1e-12);
}

TEST_P(PerKappa, DerivativeOfJ) {
    const ConnectionTable g = connection_table(GetParam());
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const Vec3 u = Vec3::Unit(i), v = Vec3::Unit(j);
            const Vec3 lhs = g.gamma(u, j_rotate(v));
            const Vec3 rhs = j_rotate(g.gamma(u, v)) + v[2] * u - u.dot(v) * Vec3::UnitZ();
            EXPECT_LT((lhs - rhs).norm(), 1e-9) << i << j;
        }
    }
}

TEST_P(PerKappa, CurvatureOfHorizontalVectors) {
    const int k = GetParam();
    std::mt19937_64 rng(13 + k);
    for (int n = 0; n < 100; ++n) {
        Vec3 u = random_vec(rng);
        u[2] = 0.0;
        if (n == 0) u = Vec3::UnitX();
        if (n == 1) u = Vec3::UnitY();
        const Vec3 v = random_vec(rng);
        const Vec3 ju = j_rotate(u);
        const Vec3 expect = (4.0 * k - 3.0) * v.dot(ju) * ju + u.squaredNorm() * v[2] * Vec3::UnitZ();
        EXPECT_LT((curvature(k, u, v, u) - expect).norm(), 1e-9);
        const Vec3 vh(v[0], v[1], 0.0);
        EXPECT_NEAR(ricci(k, v), (4.0 * k - 2.0) * vh.squaredNorm() + 2.0 * v[2] * v[2], 1e-9);
    }
}

INSTANTIATE_TEST_SUITE_P(Kappa, PerKappa, ::testing::Values(-1, 0, 1));

TEST(Connection, TableExamples) {
    EXPECT_TRUE(connection_table(0).gamma(Vec3::UnitX(), Vec3::UnitZ()).isApprox(Vec3::UnitY()));
    EXPECT_EQ(connection_table(0).gamma(Vec3::UnitZ(), Vec3::UnitZ()).norm(), 0.0);
    EXPECT_TRUE(connection_table(1).gamma(Vec3::UnitZ(), Vec3::UnitX()).isApprox(-Vec3::UnitY()));
}

TEST(Connection, CovariantDerivativeAddsComponentDerivative) {
    const ConnectionTable g = connection_table(0);
    const Vec3 r = covariant_derivative(g, Vec3::UnitX(), Vec3::UnitY(), Vec3(0.5, 0, 0));
    EXPECT_TRUE(r.isApprox(Vec3(0.5, 0, -1)));
}

TEST(Curvature, Examples) {
    for (int k : {-1, 0, 1}) {
        EXPECT_LT((curvature(k, Vec3::UnitX(), Vec3::UnitZ(), Vec3::UnitX()) - Vec3::UnitZ()).norm(), 1e-15);
    }
    EXPECT_LT((curvature(1, Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitX()) - Vec3::UnitY()).norm(), 1e-15);
    EXPECT_LT((curvature(0, Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitX()) + 3 * Vec3::UnitY()).norm(), 1e-15);
}

TEST(JRotate, Examples) {
    EXPECT_EQ(j_rotate(Vec3(1, 0, 0)), Vec3(0, 1, 0));
    EXPECT_EQ(j_rotate(Vec3(0, 0, 1)), Vec3(0, 0, 0));
    EXPECT_EQ(j_rotate(j_rotate(Vec3(1, 2, 3))), Vec3(-1, -2, 0));
    // J^2 U = -U + <U,T> T
    const Vec3 u(1, 2, 3);
    EXPECT_EQ(j_rotate(j_rotate(u)), -u + u[2] * Vec3::UnitZ());
}

TEST(RiemannianExp, ReebDirectionIsFiberTranslation) {
    for (int k : {-1, 0, 1}) {
        ModelSpace m(k);
        const Vec4 p = k == 1 ? Vec4(0.5, 0.5, 0.5, 0.5) : Vec4(0.3, -0.2, 0.1, 0);
        const Vec4 q = riemannian_exp(m, p, Vec3::UnitZ(), 1.7);
        EXPECT_LT((q - m.reeb_flow(p, 1.7)).norm(), 1e-12);
    }
}

TEST(RiemannianExp, ZeroLengthAndStraightLine) {
    ModelSpace m(0);
    const Vec4 p(0.2, 0.1, 0.3, 0);
    EXPECT_EQ(riemannian_exp(m, p, Vec3(0.3, 0.1, 0.5), 0.0), p);
    EXPECT_LT((riemannian_exp(m, Vec4::Zero(), Vec3::UnitX(), 1.0) - Vec4(1, 0, 0, 0)).norm(), 1e-14);
}

TEST(RiemannianExp, SpeedPreserved) {
    for (int k : {-1, 0, 1}) {
        ModelSpace m(k);
        const Vec4 p = k == 1 ? Vec4(0.5, -0.5, 0.5, 0.5) : Vec4(0.1, 0.05, 0, 0);
        const Vec3 v = Vec3(0.3, -0.4, 0.5).normalized() * (k == -1 ? 0.1 : 1.0);
        const int n = 1001;
        const double ds = 0.01;
        std::vector<Vec4> pts(n);
        for (int i = 0; i < n; ++i) pts[i] = riemannian_exp(m, p, v, i * ds);
        double worst = 0;
        for (int i = 0; i < n; ++i) {
            const Vec4 d = fd_first<Vec4>([&](long j) -> const Vec4& { return pts[j]; }, i, n, ds);
            worst = std::max(worst, std::abs(m.to_frame(pts[i], d).norm() - v.norm()));
        }
        EXPECT_LT(worst, 1e-8) << "kappa " << k;
    }
}

TEST(RiemannianExp, NegativeLengthReverses) {
    ModelSpace m(0);
    const Vec4 p(0.2, 0.1, 0.3, 0);
    const Vec3 v(0.3, 0.4, 0.5);
    EXPECT_LT((riemannian_exp(m, p, v, -0.8) - riemannian_exp(m, p, -v, 0.8)).norm(), 1e-12);
}

TEST(RiemannianExp, LeavesHyperbolicChart) {
    ModelSpace m(-1);
    EXPECT_THROW(riemannian_exp(m, Vec4(0.9, 0, 0, 0), Vec3::UnitX(), 50.0), ChartExit);
}

TEST(Numerics, PairwiseSumIsExactOnIntegers) {
    std::vector<double> x(1000);
    for (int i = 0; i < 1000; ++i) x[i] = i;
    EXPECT_EQ(pairwise_sum(x), 499500.0);
}
