#include <gtest/gtest.h>

#include <cmath>

#include "minmetric/metrics.hpp"
#include "minmetric/rng.hpp"

using namespace minmetric;

namespace {

ConvexBody unit_ball(int d = 3) { return ConvexBody::ball(d, 1.0); }
ConvexBody positive_halfspace(int d = 3) { return ConvexBody::halfspace(-Vec::unit(d, 0), 0.0); }
ConvexBody r_cross_disk() {
    return ConvexBody::product({{Factor::Kind::real_space, 1}, {Factor::Kind::ball, 2, 1.0}});
}

// Closed-form best planar clearance of the unit ball: with x split into the
// components along and orthogonal to v, the optimum plane keeps the
// orthogonal offset out of the slice: sqrt(1 - |x_perp|^2) - |x_par|.
double ball_clearance_oracle(const Vec& x, const Vec& v) {
    Vec vn = normalized(v);
    double xv = dot(x, vn);
    double a2 = norm2(x) - xv * xv;
    return std::sqrt(1.0 - a2) - std::abs(xv);
}

Vec random_interior_ball_point(Rng& rng, double max_r = 0.999) {
    for (;;) {
        Vec x = rng.in_box(Vec{-1, -1, -1}, Vec{1, 1, 1});
        if (norm(x) < max_r) return x;
    }
}

}  // namespace

TEST(BallMinimal, SpecValues) {
    auto ball = unit_ball();
    Rng rng(2);
    for (int i = 0; i < 10; ++i) {
        Vec v = rng.gaussian_vec(3);
        EXPECT_NEAR(ball_minimal(ball, Vec{0, 0, 0}, v), norm(v), 1e-12);
    }
    EXPECT_NEAR(ball_minimal(ball, Vec{0.5, 0, 0}, Vec{1, 0, 0}), 4.0 / 3.0, 1e-12);
    EXPECT_NEAR(ball_minimal(ball, Vec{0.5, 0, 0}, Vec{0, 1, 0}), 2.0 / std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(ball_minimal(ball, Vec{0.5, 0, 0}, Vec{0, 1, 0}), 1.154700, 1e-6);
    EXPECT_THROW(ball_minimal(ball, Vec{1.0, 0, 0}, Vec{1, 0, 0}), std::invalid_argument);
    EXPECT_THROW(ball_minimal(positive_halfspace(), Vec{1, 0, 0}, Vec{1, 0, 0}),
                 std::invalid_argument);
}

TEST(HalfspaceMinimal, SpecValues) {
    auto hs = positive_halfspace();
    EXPECT_NEAR(halfspace_minimal(hs, Vec{1, 0, 0}, Vec{1, 0, 0}), 0.5, 1e-15);
    EXPECT_NEAR(halfspace_minimal(hs, Vec{3, -2, 7}, Vec{0, 4, -1}), 0.0, 1e-15);
    EXPECT_NEAR(halfspace_minimal(hs, Vec{0.25, 0, 0}, Vec{3, 0, 0}), 6.0, 1e-15);
    EXPECT_THROW(halfspace_minimal(hs, Vec{-1, 0, 0}, Vec{1, 0, 0}), std::invalid_argument);
}

TEST(HilbertMetric, SpecValues) {
    EXPECT_NEAR(hilbert_metric(unit_ball(), Vec{0.5, 0, 0}, Vec{1, 0, 0}), 4.0 / 3.0, 1e-12);
    EXPECT_NEAR(hilbert_metric(positive_halfspace(), Vec{1, 0, 0}, Vec{1, 0, 0}), 0.5, 1e-15);
    // Along the line factor of R x D both endpoints are at infinity.
    EXPECT_EQ(hilbert_metric(r_cross_disk(), Vec{5, 0.3, -0.2}, Vec{1, 0, 0}), 0.0);
    EXPECT_EQ(hilbert_metric(unit_ball(), Vec{0.5, 0, 0}, Vec{0, 0, 0}), 0.0);
}

TEST(HilbertMetric, CoincidesWithMinimalOnBallAndHalfspace) {
    Rng rng(31);
    auto ball = unit_ball();
    auto hs = positive_halfspace();
    for (int i = 0; i < 2000; ++i) {
        Vec x = random_interior_ball_point(rng);
        Vec v = rng.gaussian_vec(3);
        if (norm2(v) == 0.0) continue;
        EXPECT_NEAR(hilbert_metric(ball, x, v), ball_minimal(ball, x, v), 1e-8);

        Vec xh{rng.uniform(0.01, 5.0), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        EXPECT_NEAR(hilbert_metric(hs, xh, v), halfspace_minimal(hs, xh, v), 1e-10);
    }
}

TEST(ModelF, SpecValues) {
    auto ball = unit_ball();
    EXPECT_NEAR(model_f(ball, Vec{0.99, 0, 0}, Vec{1, 0, 0}, 0.5), 50.0, 1e-9);
    EXPECT_NEAR(model_f(ball, Vec{0.99, 0, 0}, Vec{0, 1, 0}, 0.5), 10.0, 1e-9);
    EXPECT_NEAR(model_f(ball, Vec{0.2, 0, 0}, Vec{0, 0, 0}, 0.5), 0.0, 1e-15);
    // Outside the collar: c |v| with the continuity-matching c = 1/(2 eps).
    EXPECT_NEAR(model_f(ball, Vec{0.1, 0, 0}, Vec{0, 2, 0}, 0.5), 2.0, 1e-12);
    // Ambiguous projection inside the claimed collar is an error.
    auto cyl = ConvexBody::cylinder(3, 1.0, 0.0, 1.0);
    EXPECT_THROW(model_f(cyl, Vec{0.8, 0, 0.2}, Vec{1, 0, 0}, 0.5), AmbiguousProjectionError);
}

TEST(MinimalUpper, SpecValuesAndOracle) {
    auto ball = unit_ball();
    EXPECT_NEAR(minimal_upper(ball, Vec{0, 0, 0}, Vec{1, 0, 0}), 1.0, 1e-9);
    EXPECT_NEAR(minimal_upper(ball, Vec{0.5, 0, 0}, Vec{0, 1, 0}), 2.0 / std::sqrt(3.0), 1e-4);
    EXPECT_NEAR(minimal_upper(positive_halfspace(), Vec{1, 0, 0}, Vec{0, 1, 0}), 0.0, 1e-9);

    // Plane-grid search against the closed-form ball clearance.
    Rng rng(47);
    for (int i = 0; i < 50; ++i) {
        Vec x = random_interior_ball_point(rng, 0.95);
        Vec v = rng.unit_vec(3);
        double got = max_planar_clearance(ball, x, v);
        double want = ball_clearance_oracle(x, v);
        EXPECT_LE(got, want + 1e-12);  // sampled search stays certified
        EXPECT_NEAR(got, want, 2e-3 * want + 1e-9);
    }
}

TEST(MinimalUpper, HigherDimensionSearch) {
    auto ball4 = unit_ball(4);
    Rng rng(53);
    PlaneSearchBudget budget;
    budget.random_planes = 1024;
    for (int i = 0; i < 5; ++i) {
        Vec x(4);
        for (int c = 0; c < 4; ++c) x[c] = rng.uniform(-0.5, 0.5);
        Vec v = rng.unit_vec(4);
        double got = max_planar_clearance(ball4, x, v, budget);
        Vec vn = normalized(v);
        double xv = dot(x, vn);
        double want = std::sqrt(1.0 - (norm2(x) - xv * xv)) - std::abs(xv);
        EXPECT_LE(got, want + 1e-12);
        EXPECT_NEAR(got, want, 0.02 * want);
    }
}

TEST(HigherDimensions, EqualityAndSandwich) {
    // The formulas are dimension-generic; d > 3 exercises the random-plane
    // search path of the upper bound.
    Rng rng(59);
    for (int d : {4, 6}) {
        auto ball = unit_ball(d);
        PlaneSearchBudget budget;
        budget.random_planes = 512;
        for (int i = 0; i < 25; ++i) {
            Vec x(d);
            for (int c = 0; c < d; ++c) x[c] = rng.uniform(-0.35, 0.35);
            Vec v = rng.unit_vec(d);
            double exact = ball_minimal(ball, x, v);
            EXPECT_NEAR(hilbert_metric(ball, x, v), exact, 1e-9);
            EXPECT_LE(minimal_lower_directional(ball, x, v), exact + 1e-9);
            EXPECT_LE(exact, minimal_upper(ball, x, v, budget) + 1e-9);
        }
    }
}

TEST(MinimalLower, SpecValues) {
    EXPECT_NEAR(minimal_lower_directional(unit_ball(), Vec{0, 0, 0}, Vec{1, 0, 0}), 0.5, 1e-12);
    EXPECT_NEAR(minimal_lower_directional(positive_halfspace(), Vec{1, 0, 0}, Vec{1, 0, 0}), 0.25,
                1e-12);
    EXPECT_EQ(minimal_lower_directional(r_cross_disk(), Vec{0, 0, 0}, Vec{1, 0, 0}), 0.0);
}

TEST(Sandwich, LowerExactUpperOnBallAndHalfspace) {
    Rng rng(61);
    auto ball = unit_ball();
    auto hs = positive_halfspace();
    for (int i = 0; i < 500; ++i) {
        Vec x = random_interior_ball_point(rng);
        Vec v = rng.unit_vec(3);
        double exact = ball_minimal(ball, x, v);
        EXPECT_LE(minimal_lower_directional(ball, x, v), exact + 1e-9);
        EXPECT_LE(exact, minimal_upper(ball, x, v) + 1e-9);

        Vec xh{rng.uniform(0.01, 5.0), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        double exact_h = halfspace_minimal(hs, xh, v);
        EXPECT_LE(minimal_lower_directional(hs, xh, v), exact_h + 1e-9);
        EXPECT_LE(exact_h, minimal_upper(hs, xh, v) + 1e-9);
    }
}

TEST(HilbertDoubleBound, AtMostTwiceUpperOnConvexBodies) {
    Rng rng(71);
    std::vector<ConvexBody> bodies = {ConvexBody::ellipsoid(Vec{1.5, 1.0, 0.7}),
                                      ConvexBody::cylinder(3, 1.0, 0.0, 1.0)};
    std::vector<std::pair<Vec, double>> faces;
    for (int i = 0; i < 20; ++i) faces.emplace_back(rng.unit_vec(3), 1.0);
    bodies.push_back(ConvexBody::polytope(faces));

    for (const auto& body : bodies) {
        Vec lo, hi;
        body.bounding_box(&lo, &hi);
        int done = 0;
        for (int i = 0; i < 4000 && done < 300; ++i) {
            Vec x = rng.in_box(lo, hi);
            if (body.contains(x) != Containment::interior) continue;
            ++done;
            Vec v = rng.unit_vec(3);
            EXPECT_LE(hilbert_metric(body, x, v), 2.0 * minimal_upper(body, x, v) + 1e-9);
        }
        EXPECT_GE(done, 300);
    }

    // Unbounded product body, sampled in a finite window.
    auto rxb = r_cross_disk();
    for (int i = 0; i < 200; ++i) {
        Vec x{rng.uniform(-4, 4), 0, 0};
        for (;;) {
            x[1] = rng.uniform(-1, 1);
            x[2] = rng.uniform(-1, 1);
            if (x[1] * x[1] + x[2] * x[2] < 0.98) break;
        }
        Vec v = rng.unit_vec(3);
        EXPECT_LE(hilbert_metric(rxb, x, v), 2.0 * minimal_upper(rxb, x, v) + 1e-9);
    }
}

TEST(Homogeneity, AllEvaluators) {
    Rng rng(83);
    auto ball = unit_ball();
    std::vector<MetricEvaluator> evals;
    for (auto tag : {MetricTag::exact_minimal, MetricTag::hilbert, MetricTag::model_F,
                     MetricTag::minimal_lower, MetricTag::minimal_upper})
        evals.emplace_back(tag, ball);
    for (int i = 0; i < 60; ++i) {
        Vec x = random_interior_ball_point(rng, 0.9);
        Vec v = rng.unit_vec(3);
        double t = rng.uniform(-10.0, 10.0);
        for (const auto& ev : evals) {
            double base = ev(x, v);
            EXPECT_NEAR(ev(x, t * v), std::abs(t) * base, 1e-9 * (1.0 + std::abs(t) * base));
        }
        for (const auto& ev : evals) EXPECT_GE(ev(x, v), 0.0);
    }
}

TEST(CollarEstimate, BallVsModelF) {
    // Near-boundary ratio of the exact ball metric to the collar model
    // stays within [1/4, 4]; the sharp interval is roughly [0.69, 1.06].
    Rng rng(97);
    auto ball = unit_ball();
    for (int i = 0; i < 2000; ++i) {
        double delta = rng.uniform(1e-4, 0.1);
        Vec dir = rng.unit_vec(3);
        Vec x = (1.0 - delta) * dir;
        Vec v = rng.unit_vec(3);
        double g = ball_minimal(ball, x, v);
        double f = model_f(ball, x, v, 0.5);
        EXPECT_GE(g / f, 0.25);
        EXPECT_LE(g / f, 4.0);
    }
}

TEST(CollarEstimate, HilbertLowerBoundsModelF) {
    Rng rng(103);
    auto ball = unit_ball();
    for (int i = 0; i < 2000; ++i) {
        double delta = rng.uniform(1e-4, 0.4);
        Vec x = (1.0 - delta) * rng.unit_vec(3);
        Vec v = rng.unit_vec(3);
        EXPECT_GE(hilbert_metric(ball, x, v), 0.25 * model_f(ball, x, v, 0.5));
    }
}

TEST(RigidInvariance, EvaluatorsCommute) {
    Rng rng(113);
    auto ball = unit_ball();
    auto cyl = ConvexBody::cylinder(3, 1.0, 0.0, 1.0);
    for (int rep = 0; rep < 3; ++rep) {
        Mat q = rng.rotation(3);
        Vec t = rng.in_box(Vec{-2, -2, -2}, Vec{2, 2, 2});
        auto ball_m = ball.transformed(q, t);
        auto cyl_m = cyl.transformed(q, t);
        for (int i = 0; i < 25; ++i) {
            Vec x = random_interior_ball_point(rng, 0.95);
            Vec v = rng.unit_vec(3);
            Vec xm = q.apply(x) + t, vm = q.apply(v);
            EXPECT_NEAR(ball_minimal(ball_m, xm, vm), ball_minimal(ball, x, v), 1e-9);
            EXPECT_NEAR(hilbert_metric(ball_m, xm, vm), hilbert_metric(ball, x, v), 1e-9);
            EXPECT_NEAR(model_f(ball_m, xm, vm, 0.5), model_f(ball, x, v, 0.5), 1e-9);
            EXPECT_NEAR(minimal_upper(ball_m, xm, vm), minimal_upper(ball, x, v), 1e-9);

            Vec xc{0.5 * x[0], 0.5 * x[1], 0.5 * (x[2] + 1.0)};
            Vec xcm = q.apply(xc) + t;
            EXPECT_NEAR(hilbert_metric(cyl_m, xcm, vm), hilbert_metric(cyl, xc, v), 1e-9);
            EXPECT_NEAR(minimal_upper(cyl_m, xcm, vm), minimal_upper(cyl, xc, v), 1e-9);
        }
    }
}

TEST(Evaluator, TagsAndErrors) {
    auto ball = unit_ball();
    EXPECT_EQ(metric_tag_from_string("model_F"), MetricTag::model_F);
    EXPECT_EQ(to_string(MetricTag::minimal_upper), "minimal_upper");
    EXPECT_THROW(metric_tag_from_string("nope"), std::invalid_argument);
    EXPECT_THROW(MetricEvaluator(MetricTag::exact_minimal,
                                 ConvexBody::cylinder(3, 1.0, 0.0, 1.0)),
                 std::invalid_argument);
    MetricEvaluator ev(MetricTag::exact_minimal, ball);
    EXPECT_TRUE(ev.certifies_upper());
    EXPECT_FALSE(MetricEvaluator(MetricTag::hilbert, ball).certifies_upper());
}
