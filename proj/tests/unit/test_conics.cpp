#include <doctest.h>

#include <cmath>

#include "bikelab/conics.hpp"
#include "bikelab/rng.hpp"
#include "oracles.hpp"

using namespace bikelab;

TEST_CASE("coconic residual: image vertices, circle points, generic points") {
    Rng rng(501);
    for (int k = 0; k < 50; ++k) {
        const Polygon tri = test::random_triangle(rng);
        const FrameLength t{rng.uniform(0.05, 0.3) * tri.min_side()};
        CHECK(coconic_residual(tri, t) < 1e-10);
    }

    std::array<Point2, 6> circle;
    for (int i = 0; i < 6; ++i) {
        circle[i] = {std::cos(0.3 + i), std::sin(0.3 + i)};
    }
    CHECK(coconic_residual(circle) < 1e-14);

    // six generic points are far from coconic (fixed-seed regression)
    Rng rng2(502);
    std::array<Point2, 6> generic;
    for (int i = 0; i < 6; ++i) generic[i] = rng2.point(-1.0, 1.0);
    CHECK(coconic_residual(generic) > 1e-4);
}

TEST_CASE("point conic fit recovers the circle") {
    std::array<Point2, 5> pts;
    for (int i = 0; i < 5; ++i) pts[i] = {2.0 * std::cos(0.5 + i), 2.0 * std::sin(0.5 + i)};
    const Conic c = fit_point_conic(pts);
    CHECK(c.kind == Conic::Kind::Point);
    // x^2 + y^2 - 4 = 0 up to normalization: B = D = E = 0, A = C
    CHECK(std::abs(c.coefficients[1]) < 1e-12);
    CHECK(std::abs(c.coefficients[3]) < 1e-12);
    CHECK(std::abs(c.coefficients[4]) < 1e-12);
    CHECK(c.coefficients[0] == doctest::Approx(c.coefficients[2]).epsilon(1e-12));
    CHECK(c.coefficients[5] / c.coefficients[0] == doctest::Approx(-4.0).epsilon(1e-12));
    // a sixth point on the circle evaluates to ~0
    CHECK(point_residual(c, {2.0 * std::cos(5.9), 2.0 * std::sin(5.9)}) < 1e-13);
}

TEST_CASE("carnot: factors and product equal one") {
    Rng rng(503);
    for (int k = 0; k < 50; ++k) {
        const Polygon tri = test::random_triangle(rng);
        const FrameLength t{rng.uniform(0.05, 0.4) * tri.min_side()};
        const CarnotReport rep = carnot_factors(tri, t);
        CHECK(rep.product == doctest::Approx(1.0).epsilon(1e-12));
        for (double f : rep.factors) CHECK(f == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("inscribed conic: sixth tangent line") {
    Rng rng(504);
    for (int k = 0; k < 30; ++k) {
        const Polygon tri = test::random_triangle(rng);
        const FrameLength t{0.1 * tri.min_side()};
        CHECK(inscribed_conic_check(tri, t) < 1e-9);
    }
}

TEST_CASE("inscribed conic: hold-out choice does not matter") {
    Rng rng(505);
    const Polygon tri = test::random_triangle(rng);
    const FrameLength t{0.15 * tri.min_side()};
    for (int hold = 0; hold < 6; ++hold) {
        CHECK(fit_inscribed_conic(tri, t, hold).sixth_line_residual < 1e-9);
    }
}

TEST_CASE("inscribed conic of a centered equilateral is a circle") {
    std::vector<Point2> v;
    for (int i = 0; i < 3; ++i) {
        v.push_back({std::cos(2 * M_PI * i / 3), std::sin(2 * M_PI * i / 3)});
    }
    const Polygon tri(v);  // centroid at the origin
    const InscribedConicReport rep = fit_inscribed_conic(tri, FrameLength{0.2});
    const auto& c = rep.dual.coefficients;
    // dual of a centered circle: A = C, B = D = E = 0
    CHECK(std::abs(c[1]) < 1e-10);
    CHECK(std::abs(c[3]) < 1e-10);
    CHECK(std::abs(c[4]) < 1e-10);
    CHECK(c[0] == doctest::Approx(c[2]).epsilon(1e-10));
}

TEST_CASE("incidence: labeling found with small residuals") {
    Rng rng(506);
    for (int k = 0; k < 30; ++k) {
        const Polygon tri = test::random_triangle(rng);
        const FrameLength t{rng.uniform(0.05, 0.3) * tri.min_side()};
        const IncidenceReport rep = incidence_check(tri, t);
        CHECK(rep.labeling_found);
        CHECK(rep.collinearity_residual < 1e-8);
        CHECK(rep.concurrency_residual < 1e-8);
        CHECK(rep.coconic < 1e-10);
    }
}

TEST_CASE("incidence: equilateral configuration") {
    std::vector<Point2> v;
    for (int i = 0; i < 3; ++i) {
        v.push_back({std::cos(2 * M_PI * i / 3), std::sin(2 * M_PI * i / 3)});
    }
    const IncidenceReport rep = incidence_check(Polygon(v), FrameLength{0.3});
    CHECK(rep.labeling_found);
    CHECK(rep.collinearity_residual < 1e-8);
    CHECK(rep.concurrency_residual < 1e-8);
}

TEST_CASE("line utilities") {
    const Line l = line_through({0, 0}, {1, 1});
    CHECK(std::abs(l.h[0] + l.h[1]) < 1e-15);  // x - y = 0 up to sign
    CHECK(std::abs(l.h[2]) < 1e-15);

    const Line m = line_through({0, 1}, {1, 2});  // parallel to l
    CHECK_FALSE(intersect(l, m).has_value());

    const Line k = line_through({1, 0}, {1, 5});
    const auto p = intersect(l, k);
    REQUIRE(p.has_value());
    CHECK(distance(*p, {1, 1}) < 1e-14);

    CHECK_THROWS_AS(line_through({1, 1}, {1, 1}), DegenerateConfiguration);
}
