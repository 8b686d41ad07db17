#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "subrlab/errors.hpp"
#include "subrlab/geodesics.hpp"

using namespace subrlab;

namespace {

GeodesicTrace run(int kappa, double lambda, double s_max, double step = 1e-3, Vec4 start = Vec4::Zero(),
                  double s_min = 0.0) {
    ModelSpace m(kappa);
    GeodesicSpec spec;
    spec.start = kappa == 1 && start.norm() == 0.0 ? Vec4(1, 0, 0, 0) : start;
    spec.lambda = lambda;
    spec.s_max = s_max;
    spec.s_min = s_min;
    spec.step = step;
    return integrate_geodesic(m, spec);
}

nlohmann::json helix_fixture() {
    std::ifstream in(std::string(SUBRLAB_SOURCE_DIR) + "/tests/fixtures/helix_m0.json");
    return nlohmann::json::parse(in);
}

}  // namespace

TEST(Geodesic, StraightLineInHeisenberg) {
    const auto tr = run(0, 0.0, 2.0);
    for (const auto& smp : tr.samples) {
        EXPECT_LT((smp.point - Vec4(smp.s, 0, 0, 0)).norm(), 1e-12);
    }
}

TEST(Geodesic, SamplesAreUniform) {
    const auto tr = run(1, 0.7, 3.0, 0.01, Vec4::Zero(), -1.0);
    ASSERT_EQ(tr.samples.size(), 401u);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        EXPECT_NEAR(tr.samples[i].s - tr.samples[i - 1].s, 0.01, 1e-12);
    }
    EXPECT_EQ(tr.origin_index(), 100);
}

TEST(Geodesic, ZeroLengthReturnsStart) {
    const auto tr = run(-1, 1.3, 0.0, 1e-3, Vec4(0.2, 0.1, 0.5, 0));
    ASSERT_EQ(tr.samples.size(), 1u);
    EXPECT_EQ(tr.samples[0].point, Vec4(0.2, 0.1, 0.5, 0));
    EXPECT_EQ(tr.samples[0].velocity, Vec3(1, 0, 0));
}

TEST(Geodesic, HelixMatchesSymbolicFixture) {
    for (const auto& c : helix_fixture()["cases"]) {
        const double lam = c["lambda"], s = c["s"];
        const double n = std::ceil(s / 1e-3);
        const auto tr = run(0, lam, s, s / n);
        const Vec4 p = tr.samples.back().point;
        EXPECT_NEAR(tr.samples.back().s, s, 1e-12);
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(p[i], c["endpoint"][i].get<double>(), 1e-8) << lam << " " << s;
    }
}

TEST(Geodesic, FourthOrderConvergence) {
    auto err = [](int n) {
        const auto tr = run(0, 0.5, M_PI, M_PI / n);
        return (tr.samples.back().point - Vec4(0, -2, M_PI, 0)).norm();
    };
    const double e1 = err(50), e2 = err(100);
    EXPECT_NEAR(e1 / e2, 16.0, 1.5);
}

TEST(Geodesic, FrameComponentsRotate) {
    for (double lam : {0.3, -1.1, 2.0}) {
        const auto tr = run(0, lam, 10.0);
        for (const auto& smp : tr.samples) {
            const double th = 2 * lam * smp.s;
            EXPECT_NEAR(smp.velocity[0], std::cos(th), 1e-9);
            EXPECT_NEAR(smp.velocity[1], -std::sin(th), 1e-9);
        }
    }
}

TEST(Geodesic, ConservedSpeedAndHorizontality) {
    for (int k : {-1, 0, 1}) {
        for (double lam : {0.0, 0.5, 1.0, 2.0}) {
            // centred segment keeps M(-1) inside the numerically usable part of the disk
            const auto tr = k == -1 ? run(k, lam, 10.0, 1e-3, Vec4::Zero(), -10.0) : run(k, lam, 20.0);
            EXPECT_LT(tr.drift.max(), 1e-8) << k << " " << lam;
        }
    }
}

TEST(Geodesic, PositionsMoveWithUnitHorizontalSpeed) {
    for (int k : {-1, 0, 1}) {
        ModelSpace m(k);
        const auto tr = run(k, 0.8, 5.0, 1e-3, k == -1 ? Vec4(0.1, 0.2, 0, 0) : Vec4::Zero());
        EXPECT_LT(position_drift(m, tr).max(), 1e-8) << k;
    }
}

TEST(Geodesic, HyperbolicLineLeavesChart) {
    try {
        run(-1, 0.0, 100.0, 1e-3, Vec4(0.9, 0, 0, 0));
        FAIL() << "expected ChartExit";
    } catch (const ChartExit& e) {
        EXPECT_GT(e.s_exit, 1.0);
        EXPECT_LT(e.s_exit, 100.0);
    }
}

TEST(Geodesic, LargeStepReported) {
    EXPECT_THROW(run(0, 5.0, 20.0, 0.2), StepTooLarge);
}

TEST(Geodesic, RejectsBadSpec) {
    ModelSpace m(0);
    GeodesicSpec spec;
    spec.direction = Vec3(1, 0, 0.1);
    EXPECT_THROW(integrate_geodesic(m, spec), ValidationError);
    spec.direction = Vec3(1, 0, 0);
    spec.step = -1;
    EXPECT_THROW(integrate_geodesic(m, spec), ValidationError);
}

TEST(ProjectionCurvature, HeisenbergHelix) {
    ModelSpace m(0);
    const auto st = projection_curvature_stats(m, run(0, 0.3, 10.0));
    EXPECT_NEAR(st.mean, 0.6, 1e-4);
    EXPECT_LT(st.stddev, 1e-4);
}

TEST(ProjectionCurvature, HyperbolicLine) {
    ModelSpace m(-1);
    EXPECT_NEAR(projection_curvature(m, run(-1, 0.0, 3.0)), 0.0, 1e-4);
}

TEST(ProjectionCurvature, HyperbolicCircleAroundOrigin) {
    // geodesic curvature of the Euclidean circle of radius r about 0 in the curvature -4 disk
    ModelSpace m(-1);
    const double r = 0.4, h = (1 + r * r) / r;
    const auto tr = run(-1, h / 2, 3.0, 1e-3, Vec4(r, 0, 0, 0));
    GeodesicSpec spec;
    spec.start = Vec4(r, 0, 0, 0);
    // positive lambda turns clockwise
    spec.direction = Vec3(0, -1, 0);
    spec.lambda = h / 2;
    spec.s_max = 3.0;
    const auto circ = integrate_geodesic(m, spec);
    for (const auto& smp : circ.samples) EXPECT_NEAR(std::hypot(smp.point[0], smp.point[1]), r, 1e-9);
    EXPECT_NEAR(projection_curvature(m, circ), h, 1e-4);
    EXPECT_NEAR(projection_curvature(m, tr), h, 1e-4);
}

TEST(ProjectionCurvature, SphereThroughHopf) {
    ModelSpace m(1);
    EXPECT_NEAR(projection_curvature(m, run(1, 1.0, 5.0)), 2.0, 1e-3);
    EXPECT_NEAR(projection_curvature(m, run(1, -0.4, 5.0)), -0.8, 1e-3);
}

TEST(ProjectionCurvature, HopfPushIsDerivative) {
    const Vec4 p = Vec4(0.3, -0.2, 0.5, 0.6).normalized();
    const Vec4 w(0.1, 0.7, -0.3, 0.2);
    const double h = 1e-6;
    const Eigen::Vector3d fd = (hopf_half(p + h * w) - hopf_half(p - h * w)) / (2 * h);
    EXPECT_LT((fd - hopf_half_push(p, w)).norm(), 1e-9);
}

TEST(Completeness, GreatCircleIsClosed) {
    ModelSpace m(1);
    const auto res = classify_completeness(m, run(1, 0.0, 4 * M_PI + 0.5));
    ASSERT_EQ(res.kind, Completeness::closed);
    EXPECT_NEAR(res.period, 2 * M_PI, 1e-6);
}

TEST(Completeness, HeisenbergLineIsInjective) {
    ModelSpace m(0);
    EXPECT_EQ(classify_completeness(m, run(0, 0.0, 4 * M_PI)).kind, Completeness::injective);
    EXPECT_EQ(classify_completeness(m, run(0, 0.5, 4 * M_PI)).kind, Completeness::injective);
}

TEST(Completeness, HyperbolicFromCentreIsInjective) {
    ModelSpace m(-1);
    for (double lam : {0.0, 0.6, 1.0, 2.0}) {
        EXPECT_EQ(classify_completeness(m, run(-1, lam, 4 * M_PI / std::max(1.0, 2 * lam))).kind,
                  Completeness::injective)
            << lam;
    }
}
