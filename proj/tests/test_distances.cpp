#include <gtest/gtest.h>

#include <cmath>

#include "minmetric/distances.hpp"
#include "minmetric/rng.hpp"

using namespace minmetric;

namespace {

ConvexBody unit_ball() { return ConvexBody::ball(3, 1.0); }
ConvexBody positive_halfspace() { return ConvexBody::halfspace(-Vec::unit(3, 0), 0.0); }
ConvexBody r_cross_disk() {
    return ConvexBody::product({{Factor::Kind::real_space, 1}, {Factor::Kind::ball, 2, 1.0}});
}

}  // namespace

TEST(Polyline, Invariants) {
    EXPECT_THROW(Polyline({Vec{0, 0, 0}}, {0.0}), std::invalid_argument);
    EXPECT_THROW(Polyline({Vec{0, 0, 0}, Vec{1, 0, 0}}, {0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(Polyline({Vec{0, 0, 0}, Vec{1, 0, 0}}, {1.0, 0.0}), std::invalid_argument);
    Polyline ok({Vec{0, 0, 0}, Vec{0.5, 0, 0}}, {0.0, 1.0});
    EXPECT_EQ(ok.points.size(), 2u);
    auto ball = unit_ball();
    EXPECT_THROW(Polyline::segment(Vec{0, 0, 0}, Vec{2, 0, 0}).validate_inside(ball),
                 std::invalid_argument);
}

TEST(CurveLength, HalfspaceRadialIntegral) {
    // Analytic oracle: int dx/(2x) from 1 to e^2 = 1.
    auto hs = positive_halfspace();
    MetricEvaluator exact(MetricTag::exact_minimal, hs);
    double e2 = std::exp(2.0);
    double len = curve_length(exact, Polyline::segment(Vec{1, 0, 0}, Vec{e2, 0, 0}));
    EXPECT_NEAR(len, 1.0, 1e-6);

    // Splitting the segment into many pieces does not change the length.
    std::vector<Vec> pts;
    std::vector<double> prm;
    for (int i = 0; i <= 16; ++i) {
        double s = static_cast<double>(i) / 16;
        pts.push_back(Vec{1.0 + (e2 - 1.0) * s, 0, 0});
        prm.push_back(s);
    }
    EXPECT_NEAR(curve_length(exact, Polyline(pts, prm)), 1.0, 1e-9);
}

TEST(CurveLength, ModelFRadialCollarSegment) {
    // Straight radial collar segments have model_F length |log(h(y)/h(x))|.
    auto ball = unit_ball();
    MetricEvaluator f(MetricTag::model_F, ball, {0.5, 0.0, {}});
    double len = curve_length(f, Polyline::segment(Vec{0.96, 0, 0}, Vec{0.84, 0, 0}));
    EXPECT_NEAR(len, std::log(2.0), 1e-6);  // h: 0.2 -> 0.4
}

TEST(CurveLength, DegenerateAndErrors) {
    auto ball = unit_ball();
    MetricEvaluator exact(MetricTag::exact_minimal, ball);
    EXPECT_EQ(curve_length(exact, Polyline::segment(Vec{0.2, 0, 0}, Vec{0.2, 0, 0})), 0.0);
    EXPECT_THROW(curve_length(exact, Polyline::segment(Vec{0, 0, 0}, Vec{1.5, 0, 0})),
                 std::invalid_argument);
}

TEST(CurveLength, CollarCurveLowerBound) {
    // l_F(gamma) >= |log(h(y)/h(x))| + H(pi(x), pi(y)) / (2 max h) on collar
    // curves of the ball, where H along the unit sphere is the angle.
    auto ball = unit_ball();
    MetricEvaluator f(MetricTag::model_F, ball, {0.5, 0.0, {}});
    Rng rng(5);
    for (int rep = 0; rep < 40; ++rep) {
        double d0 = rng.uniform(0.01, 0.4), d1 = rng.uniform(0.01, 0.4);
        double ang = rng.uniform(0.1, 1.2);
        Vec axis = rng.unit_vec(3);
        int m = 0;
        auto basis = orthonormal_complement(axis, &m);
        auto omega = [&](double a) { return std::cos(a) * basis[0] + std::sin(a) * basis[1]; };
        std::vector<Vec> pts;
        std::vector<double> prm;
        const int n = 24;
        double hmax = 0.0;
        for (int i = 0; i <= n; ++i) {
            double s = static_cast<double>(i) / n;
            double delta = d0 + (d1 - d0) * s;
            pts.push_back((1.0 - delta) * omega(ang * s));
            prm.push_back(s);
            hmax = std::max(hmax, std::sqrt(delta));
        }
        double len = curve_length(f, Polyline(pts, prm));
        double bound = std::abs(std::log(std::sqrt(d1) / std::sqrt(d0))) + 0.5 * ang / hmax;
        EXPECT_GE(len, bound - 1e-6);
    }
}

TEST(HilbertDistance, SpecValues) {
    auto ball = unit_ball();
    EXPECT_NEAR(hilbert_distance(ball, Vec{0, 0, 0}, Vec{0.5, 0, 0}), std::atanh(0.5), 1e-12);
    EXPECT_NEAR(hilbert_distance(ball, Vec{0, 0, 0}, Vec{0.5, 0, 0}), 0.549306, 1e-6);
    EXPECT_EQ(hilbert_distance(ball, Vec{0.3, 0.1, 0}, Vec{0.3, 0.1, 0}), 0.0);
    // Points of R x D differing only along the line factor.
    EXPECT_EQ(hilbert_distance(r_cross_disk(), Vec{1, 0.2, 0.3}, Vec{9, 0.2, 0.3}), 0.0);
}

TEST(HilbertDistance, MatchesKleinClosedForm) {
    Rng rng(17);
    auto ball = unit_ball();
    for (int i = 0; i < 3000; ++i) {
        Vec x = 0.98 * rng.uniform() * rng.unit_vec(3);
        Vec y = 0.98 * rng.uniform() * rng.unit_vec(3);
        EXPECT_NEAR(hilbert_distance(ball, x, y), klein_ball_distance(x, y),
                    1e-9 * (1.0 + klein_ball_distance(x, y)));
    }
}

TEST(HilbertDistance, SymmetryAndTriangle) {
    Rng rng(29);
    auto ball = unit_ball();
    auto cyl = ConvexBody::cylinder(3, 1.0, 0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        Vec x = 0.95 * rng.uniform() * rng.unit_vec(3);
        Vec y = 0.95 * rng.uniform() * rng.unit_vec(3);
        Vec z = 0.95 * rng.uniform() * rng.unit_vec(3);
        EXPECT_NEAR(hilbert_distance(ball, x, y), hilbert_distance(ball, y, x), 1e-9);
        EXPECT_LE(hilbert_distance(ball, x, y),
                  hilbert_distance(ball, x, z) + hilbert_distance(ball, z, y) + 1e-6);

        Vec xc{0.9 * x[0], 0.9 * x[1], 0.5 + 0.45 * x[2]};
        Vec yc{0.9 * y[0], 0.9 * y[1], 0.5 + 0.45 * y[2]};
        Vec zc{0.9 * z[0], 0.9 * z[1], 0.5 + 0.45 * z[2]};
        EXPECT_NEAR(hilbert_distance(cyl, xc, yc), hilbert_distance(cyl, yc, xc), 1e-9);
        EXPECT_LE(hilbert_distance(cyl, xc, yc),
                  hilbert_distance(cyl, xc, zc) + hilbert_distance(cyl, zc, yc) + 1e-6);
    }
}

TEST(MinimalDistanceLower, SpecValues) {
    auto ball = unit_ball();
    EXPECT_NEAR(minimal_distance_lower(ball, Vec{0, 0, 0}, Vec{0.5, 0, 0}), 0.5 * std::log(2.0),
                1e-12);
    EXPECT_NEAR(minimal_distance_lower(ball, Vec{0, 0, 0}, Vec{0.5, 0, 0}), 0.346574, 1e-6);
    EXPECT_EQ(minimal_distance_lower(ball, Vec{0.2, 0, 0}, Vec{0.2, 0, 0}), 0.0);
    // Half-space pair along the normal: Thales ratio equals the coordinate ratio.
    auto hs = positive_halfspace();
    EXPECT_NEAR(minimal_distance_lower(hs, Vec{1, 0.7, -0.3}, Vec{std::exp(2.0), 0.7, -0.3}), 1.0,
                1e-12);
}

TEST(MinimalDistanceLower, BelowHilbertAndSymmetric) {
    Rng rng(37);
    auto ball = unit_ball();
    for (int i = 0; i < 1000; ++i) {
        Vec x = 0.95 * rng.uniform() * rng.unit_vec(3);
        Vec y = 0.95 * rng.uniform() * rng.unit_vec(3);
        double l = minimal_distance_lower(ball, x, y);
        EXPECT_NEAR(l, minimal_distance_lower(ball, y, x), 1e-9);
        EXPECT_GE(l, 0.5 * hilbert_distance(ball, x, y) - 1e-12);
        // On the ball the minimal distance is the Hilbert distance, so the
        // lower bound must stay below it.
        EXPECT_LE(l, hilbert_distance(ball, x, y) + 1e-12);
    }
}

TEST(DistanceReport, OrderingChecked) {
    DistanceReport rep;
    rep.lower = 2.0;
    rep.upper = 1.0;
    EXPECT_THROW(rep.check(), std::logic_error);
    rep.upper = 2.0;
    EXPECT_NO_THROW(rep.check());
}
