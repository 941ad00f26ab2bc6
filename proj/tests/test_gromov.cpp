#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "minmetric/gromov.hpp"
#include "minmetric/rng.hpp"

using namespace minmetric;

namespace {

ConvexBody unit_ball() { return ConvexBody::ball(3, 1.0); }

DistanceReport exact_report(double d) {
    DistanceReport r;
    r.lower = r.upper = d;
    r.method = "test";
    return r;
}

QuadrupleSample euclidean_quadruple(const std::array<Vec, 4>& pts) {
    QuadrupleSample q;
    q.points = pts;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            q.distances[QuadrupleSample::pair_index(i, j)] = exact_report(distance(pts[i], pts[j]));
    return q;
}

}  // namespace

TEST(GromovProduct, ArithmeticAndFlagging) {
    EXPECT_EQ(gromov_product(0.0, 2.0, 2.0), 0.0);               // o = x
    EXPECT_NEAR(gromov_product(1.0, 3.0, 2.0), 1.0, 1e-15);     // collinear 0,1,3 from 0
    EXPECT_NEAR(gromov_product(1.0, 1.0, 1.0), 0.5, 1e-15);     // equilateral
    EXPECT_EQ(gromov_product(1.0, 1.0, 2.0 + 5e-7), 0.0);       // clipped within tolerance
    EXPECT_THROW(gromov_product(1.0, 1.0, 3.0), std::domain_error);
    EXPECT_THROW(gromov_product(kInfinity, 1.0, 1.0), std::invalid_argument);
}

TEST(FourPointDelta, LineIsFlat) {
    std::vector<QuadrupleSample> samples;
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        std::array<Vec, 4> pts;
        for (auto& p : pts) p = Vec{rng.uniform(-5, 5), 0, 0};
        samples.push_back(euclidean_quadruple(pts));
    }
    auto rep = four_point_delta(samples);
    EXPECT_NEAR(rep.delta_estimate, 0.0, 1e-12);
    EXPECT_EQ(rep.sample_count, 200u);
}

TEST(FourPointDelta, SquareCornersAndScaling) {
    auto corners = [](double s) {
        return euclidean_quadruple(
            {Vec{0, 0, 0}, Vec{s, 0, 0}, Vec{s, s, 0}, Vec{0, s, 0}});
    };
    auto rep1 = four_point_delta({corners(1.0)});
    EXPECT_NEAR(rep1.delta_estimate, std::sqrt(2.0) - 1.0, 1e-12);
    EXPECT_NEAR(rep1.delta_estimate, 0.414214, 1e-6);
    // Linear growth of the flatness defect.
    for (double s : {2.0, 4.0, 8.0}) {
        auto rep = four_point_delta({corners(s)});
        EXPECT_NEAR(rep.delta_estimate, s * (std::sqrt(2.0) - 1.0), 1e-12);
    }
}

TEST(FourPointDelta, RelabelingInvarianceAndMonotonicity) {
    Rng rng(7);
    std::array<Vec, 4> pts;
    for (auto& p : pts) p = rng.in_box(Vec{-1, -1, -1}, Vec{1, 1, 1});
    double base = four_point_delta({euclidean_quadruple(pts)}).delta_estimate;

    std::array<int, 4> perm = {0, 1, 2, 3};
    std::sort(perm.begin(), perm.end());
    do {
        std::array<Vec, 4> shuffled;
        for (int i = 0; i < 4; ++i) shuffled[i] = pts[perm[i]];
        EXPECT_NEAR(four_point_delta({euclidean_quadruple(shuffled)}).delta_estimate, base, 1e-12);
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Max over supersets never decreases.
    std::vector<QuadrupleSample> samples;
    double prev = 0.0;
    for (int i = 0; i < 50; ++i) {
        std::array<Vec, 4> q;
        for (auto& p : q) p = rng.in_box(Vec{-1, -1, -1}, Vec{1, 1, 1});
        samples.push_back(euclidean_quadruple(q));
        double cur = four_point_delta(samples).delta_estimate;
        EXPECT_GE(cur, prev - 1e-15);
        prev = cur;
    }
}

TEST(FourPointDelta, ScaleCovariance) {
    Rng rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        std::array<Vec, 4> pts;
        for (auto& p : pts) p = rng.in_box(Vec{-2, -2, -2}, Vec{2, 2, 2});
        auto q = euclidean_quadruple(pts);
        double base = four_point_delta({q}).delta_estimate;
        double lambda = rng.uniform(0.1, 10.0);
        auto scaled = q;
        for (auto& r : scaled.distances) {
            r.lower *= lambda;
            r.upper *= lambda;
        }
        EXPECT_NEAR(four_point_delta({scaled}).delta_estimate, lambda * base,
                    1e-12 * (1.0 + lambda * base));
    }
}

TEST(FourPointDelta, UncertaintyTracksReportWidth) {
    auto q = euclidean_quadruple({Vec{0, 0, 0}, Vec{1, 0, 0}, Vec{1, 1, 0}, Vec{0, 1, 0}});
    q.distances[0].lower -= 0.01;
    q.distances[0].upper += 0.03;
    auto rep = four_point_delta({q});
    EXPECT_NEAR(rep.uncertainty, 0.04, 1e-12);
    EXPECT_THROW(four_point_delta({}), std::invalid_argument);

    q.distances[3].upper = kInfinity;  // unbounded reports are rejected
    EXPECT_THROW(four_point_delta({q}), std::invalid_argument);
}

TEST(QuasiGeodesic, BallConstructionAndCertification) {
    auto ball = unit_ball();
    auto qg = build_quasi_geodesic(ball, Vec{0, 0, 0}, Vec{1, 0, 0}, 1.0, 2.0, 33);
    EXPECT_NEAR(distance(qg.path.points.front(), Vec{0, 0, 0}), 0.0, 1e-12);  // sigma(0) = p
    EXPECT_NEAR(qg.aperture, 1.0, 1e-9);
    EXPECT_NEAR(qg.mult_const, 2.0, 1e-9);

    // Lower certificates are exact through the boundary anchor.
    const auto& pts = qg.path.points;
    const auto& prm = qg.path.params;
    for (std::size_t i = 0; i < pts.size(); i += 4)
        for (std::size_t j = i + 1; j < pts.size(); j += 4)
            EXPECT_GE(minimal_distance_lower(ball, pts[i], pts[j]), prm[j] - prm[i] - 1e-9);

    MetricEvaluator upper(MetricTag::minimal_upper, ball);
    auto chk = certify_quasi_geodesic(ball, qg, upper);
    EXPECT_LE(chk.lower_violation, 1e-6);
    EXPECT_LE(chk.upper_violation, 1e-6);
}

TEST(QuasiGeodesic, CylinderCertification) {
    auto cyl = ConvexBody::cylinder(3, 1.0, 0.0, 1.0);
    auto qg = build_quasi_geodesic(cyl, Vec{0, 0, 0.5}, Vec{1, 0, 0.5}, 0.5, 1.5, 21);
    EXPECT_NEAR(qg.aperture, 0.5, 1e-6);
    MetricEvaluator upper(MetricTag::minimal_upper, cyl);
    auto chk = certify_quasi_geodesic(cyl, qg, upper);
    EXPECT_LE(chk.lower_violation, 1e-6);
    EXPECT_LE(chk.upper_violation, 1e-6);
}

TEST(QuasiGeodesic, Errors) {
    auto ball = unit_ball();
    EXPECT_THROW(build_quasi_geodesic(ball, Vec{0, 0, 0}, Vec{0.5, 0, 0}, 1.0, 2.0, 8),
                 std::invalid_argument);  // xi not on the boundary
    EXPECT_THROW(build_quasi_geodesic(ball, Vec{2, 0, 0}, Vec{1, 0, 0}, 1.0, 2.0, 8),
                 std::invalid_argument);  // p not interior
}

TEST(TriangleSlimness, DegenerateAndKleinTriangle) {
    auto ball = unit_ball();
    auto lower = [&](const Vec& a, const Vec& b) { return klein_ball_distance(a, b); };

    Polyline side = Polyline::segment(Vec{0.1, 0, 0}, Vec{0.5, 0, 0});
    EXPECT_EQ(triangle_slimness({side, side, side}, lower, 32), 0.0);

    // Hilbert geodesics of the ball are straight chords; the triangle on
    // 0.9 e_i stays thin in the Klein metric.
    std::array<Polyline, 3> sides = {
        Polyline::segment(Vec{0.9, 0, 0}, Vec{0, 0.9, 0}),
        Polyline::segment(Vec{0, 0.9, 0}, Vec{0, 0, 0.9}),
        Polyline::segment(Vec{0, 0, 0.9}, Vec{0.9, 0, 0})};
    double slim = triangle_slimness(sides, lower, 96);
    EXPECT_GT(slim, 0.0);
    EXPECT_LE(slim, 2.0);

    std::array<Polyline, 3> broken = {
        Polyline::segment(Vec{0.9, 0, 0}, Vec{0, 0.9, 0}),
        Polyline::segment(Vec{0.2, 0.2, 0.2}, Vec{0, 0, 0.9}),
        Polyline::segment(Vec{0, 0, 0.9}, Vec{0.3, 0.3, -0.3})};
    EXPECT_THROW(triangle_slimness(broken, lower, 16), std::invalid_argument);
}

TEST(TriangleSlimness, FatteningOnTheCylinderFlatFace) {
    // Quasi-geodesic triangles hugging the flat bottom face get fatter as
    // the horizon grows (certified lower-bound slimness).
    auto cyl = ConvexBody::cylinder(3, 1.0, 0.0, 1.0);
    Vec p{0, 0, 0.5};
    Vec xi{0, 0, 0};   // interior point of the flat face
    Vec eta{1, 0, 0};  // edge of the flat face
    auto lower = [&](const Vec& a, const Vec& b) { return minimal_distance_lower(cyl, a, b); };
    double prev = -1.0;
    for (double T : {2.0, 3.0}) {
        auto gamma = build_quasi_geodesic(cyl, p, xi, 0.0, T, 48);
        auto sigma = build_quasi_geodesic(cyl, p, eta, 0.0, T, 48);
        std::array<Polyline, 3> sides = {
            gamma.path, Polyline::segment(gamma.path.points.back(), sigma.path.points.back()),
            sigma.path};
        double slim = triangle_slimness(sides, lower, 48);
        EXPECT_GT(slim, prev);
        prev = slim;
    }
}
