#include <gtest/gtest.h>

#include "minmetric/body_format.hpp"

using namespace minmetric;

TEST(BodyFormat, ParsesEveryKind) {
    auto ball = parse_body_string("kind = ball\ndim = 3\nradius = 2.0\ncenter = 1 0 0\n");
    EXPECT_EQ(ball.kind(), ConvexBody::Kind::ball);
    EXPECT_EQ(ball.contains(Vec{1, 0, 0}), Containment::interior);
    EXPECT_EQ(ball.contains(Vec{3, 0, 0}), Containment::boundary);

    auto hs = parse_body_string("kind = halfspace\ndim = 3\nhalfspace = -1 0 0 ; 0\n");
    EXPECT_EQ(hs.contains(Vec{2, 1, 1}), Containment::interior);
    EXPECT_EQ(hs.contains(Vec{-2, 1, 1}), Containment::exterior);

    auto ell = parse_body_string("kind = ellipsoid\ndim = 3\nsemi_axes = 1.5 1.0 0.7\n");
    EXPECT_EQ(ell.kind(), ConvexBody::Kind::ellipsoid);
    EXPECT_EQ(ell.contains(Vec{1.4, 0, 0}), Containment::interior);

    auto cyl = parse_body_string("kind = cylinder\ndim = 3\nradius = 1\nheight = 0 1\n");
    EXPECT_NEAR(cyl.boundary_distance(Vec{0, 0, 0.1}), 0.1, 1e-12);

    auto poly = parse_body_string(
        "kind = polytope\ndim = 3\n"
        "halfspace = 1 0 0 ; 1\nhalfspace = -1 0 0 ; 1\n"
        "halfspace = 0 1 0 ; 1\nhalfspace = 0 -1 0 ; 1\n"
        "halfspace = 0 0 1 ; 1\nhalfspace = 0 0 -1 ; 1\n");
    EXPECT_TRUE(poly.is_bounded());
    EXPECT_NEAR(poly.boundary_distance(Vec{0, 0, 0}), 1.0, 1e-12);

    auto prod = parse_body_string(
        "kind = product\ndim = 3\nfactors = space 1\nfactors = ball 2 1.0\n");
    EXPECT_FALSE(prod.contains_two_flat());
    EXPECT_EQ(prod.contains(Vec{100, 0, 0}), Containment::interior);
}

TEST(BodyFormat, CommentsAndWhitespace) {
    auto b = parse_body_string("# a ball\n\n  kind = ball \n dim = 3 \n radius = 1\n");
    EXPECT_EQ(b.kind(), ConvexBody::Kind::ball);
}

TEST(BodyFormat, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(parse_body_string("kind = ball\ndim = 3\nbogus = 1\n"), BodyParseError);
    EXPECT_THROW(parse_body_string("kind = ball\ndim = x\n"), BodyParseError);
    EXPECT_THROW(parse_body_string("kind = pyramid\ndim = 3\n"), BodyParseError);
    EXPECT_THROW(parse_body_string("kind = ball\n"), BodyParseError);
    EXPECT_THROW(parse_body_string("dim = 3\n"), BodyParseError);
    EXPECT_THROW(parse_body_string("kind = ball\ndim = 3\nradius = -1\n"), BodyParseError);
    EXPECT_THROW(parse_body_string("kind = halfspace\ndim = 3\n"), BodyParseError);
    EXPECT_THROW(parse_body_string("kind = polytope\ndim = 3\n"), BodyParseError);
    EXPECT_THROW(parse_body_string("kind = ball\ndim = 3\nradius 1\n"), BodyParseError);
    // Product block dims must match the declared dim when present.
    EXPECT_THROW(parse_body_string("kind = product\ndim = 4\nfactors = space 1\nfactors = ball 2 1\n"),
                 BodyParseError);
    EXPECT_THROW(parse_body_string("kind = ball\ndim = 3\ncenter = 1 2\n"), BodyParseError);
}

TEST(BodyFormat, LoadsFromFile) {
    const char* path = "/tmp/minmetric_body_test.domain";
    {
        std::ofstream f(path);
        f << "kind = ball\ndim = 3\nradius = 1.0\n";
    }
    auto b = load_body_file(path);
    EXPECT_EQ(b.kind(), ConvexBody::Kind::ball);
    EXPECT_THROW(load_body_file("/tmp/minmetric_missing.domain"), BodyParseError);
}
