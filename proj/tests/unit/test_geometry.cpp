#include <doctest.h>

#include <cmath>

#include "bikelab/geometry.hpp"
#include "bikelab/rng.hpp"
#include "oracles.hpp"

using namespace bikelab;

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), Error);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {0, std::nan("")}}), Error);
    const Polygon p({{0, 0}, {1, 0}, {0, 1}});
    CHECK(p.size() == 3);
    CHECK(p.vertex(-1).x == doctest::Approx(0.0));
    CHECK(p.vertex(3).x == doctest::Approx(0.0));
}

TEST_CASE("edge data on the 3-4-5 right triangle") {
    const Polygon p({{0, 0}, {3, 0}, {0, 4}});
    const EdgeData e = edge_data(p);
    CHECK(e.lengths[0] == doctest::Approx(4.0));
    CHECK(e.lengths[1] == doctest::Approx(3.0));
    CHECK(e.lengths[2] == doctest::Approx(5.0));
    CHECK(e.units[0].x == doctest::Approx(0.0));
    CHECK(e.units[0].y == doctest::Approx(-1.0));
    CHECK(e.units[1].x == doctest::Approx(1.0));
    CHECK(e.units[2].x == doctest::Approx(-0.6));
    CHECK(e.units[2].y == doctest::Approx(0.8));
    // reconstruction closes up
    for (int i = 0; i < 3; ++i) {
        const Point2 rebuilt = p.vertex(i - 1) + e.lengths[i] * e.units[i];
        CHECK(distance(rebuilt, p[i]) < 1e-14);
    }
}

TEST_CASE("edge data on the unit square and unit norms") {
    const Polygon sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const EdgeData e = edge_data(sq);
    for (double len : e.lengths) CHECK(len == doctest::Approx(1.0));
    for (const Point2& u : e.units) CHECK(norm(u) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("degenerate side throws") {
    const Polygon p({{0, 0}, {0, 0}, {1, 1}});
    CHECK_THROWS_AS(edge_data(p), DegenerateSide);
}

TEST_CASE("perimeter") {
    CHECK(perimeter(Polygon({{0, 0}, {3, 0}, {0, 4}})) == doctest::Approx(12.0));
    CHECK(perimeter(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})) == doctest::Approx(4.0));
    // regular 7-gon with side s
    const int n = 7;
    const double r = 1.7;
    std::vector<Point2> v;
    for (int i = 0; i < n; ++i) {
        v.push_back({r * std::cos(2 * M_PI * i / n), r * std::sin(2 * M_PI * i / n)});
    }
    const double side = 2.0 * r * std::sin(M_PI / n);
    CHECK(perimeter(Polygon(v)) == doctest::Approx(n * side));
}

TEST_CASE("signed area") {
    CHECK(signed_area(Polygon({{0, 0}, {2, 0}, {0, 2}})) == doctest::Approx(2.0));
    CHECK(signed_area(Polygon({{0, 2}, {2, 0}, {0, 0}})) == doctest::Approx(-2.0));
    CHECK(signed_area(Polygon({{1, 0}, {1, 1}, {0, 1}})) == doctest::Approx(0.5));
}

TEST_CASE("multi-area examples") {
    CHECK(multi_area(Polygon({{1, 0}, {1, 1}, {0, 1}})) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(multi_area(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})), EvenGon);

    // collinear pentagon: multi-area vanishes, and stays zero after translation
    const Polygon line({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}});
    CHECK(std::abs(multi_area(line)) < 1e-12);
    CHECK(std::abs(multi_area(line.translated({5.5, -2.25}))) < 1e-10);
}

TEST_CASE("multi-area: single-sum equals the double-sum oracle") {
    Rng rng(101);
    for (int n : {3, 5, 7, 9}) {
        for (int k = 0; k < 250; ++k) {
            const Polygon p = test::random_polygon(rng, n);
            const double a = multi_area(p);
            const double b = test::multi_area_double_sum(p);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST_CASE("multi-area translation invariance") {
    Rng rng(102);
    for (int n : {3, 5, 7, 9}) {
        for (int k = 0; k < 50; ++k) {
            const Polygon p = test::random_polygon(rng, n);
            const Point2 shift = rng.point(-10.0, 10.0);
            const double a = multi_area(p);
            const double b = multi_area(p.translated(shift));
            CHECK(std::abs(a - b) <= 1e-11 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("alternating sum examples") {
    // parallelogram
    const Polygon par({{0, 0}, {2, 1}, {3, 4}, {1, 3}});
    const Point2 v = alternating_sum(par);
    CHECK(std::abs(v.x) < 1e-14);
    CHECK(std::abs(v.y) < 1e-14);

    const Point2 w = alternating_sum(Polygon({{0, 0}, {2, 0}, {3, 2}, {0, 1}}));
    CHECK(w.x == doctest::Approx(1.0));
    CHECK(w.y == doctest::Approx(1.0));

    CHECK_THROWS_AS(alternating_sum(Polygon({{0, 0}, {1, 0}, {0, 1}})), OddGon);
}

TEST_CASE("alternating sum: origin independence and cyclic sign flip") {
    Rng rng(103);
    const Polygon p = test::random_polygon(rng, 6);
    const Point2 a = alternating_sum(p);
    const Point2 b = alternating_sum(p.translated({3.25, -1.5}));
    CHECK(distance(a, b) < 1e-13);

    std::vector<Point2> shifted(p.vertices().begin() + 1, p.vertices().end());
    shifted.push_back(p[0]);
    const Point2 c = alternating_sum(Polygon(shifted));
    CHECK(distance(a, -c) < 1e-13);
}

TEST_CASE("midpoint parent examples") {
    const Polygon parent = midpoint_parent(Polygon({{1, 0}, {1, 1}, {0, 1}}));
    CHECK(distance(parent[0], {0, 0}) < 1e-14);
    CHECK(distance(parent[1], {2, 0}) < 1e-14);
    CHECK(distance(parent[2], {0, 2}) < 1e-14);

    CHECK_THROWS_AS(midpoint_parent(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})), EvenGon);
}

TEST_CASE("midpoint parent round trip on a random heptagon") {
    Rng rng(104);
    const Polygon p = test::random_polygon(rng, 7);
    const Polygon back = midpoints(midpoint_parent(p));
    CHECK(test::max_vertex_distance(back, p) < 1e-12 * p.diameter());
}

TEST_CASE("midpoint parent of a centered equilateral is anticomplementary") {
    std::vector<Point2> v;
    for (int i = 0; i < 3; ++i) {
        v.push_back({std::cos(2 * M_PI * i / 3), std::sin(2 * M_PI * i / 3)});
    }
    const Polygon p(v);
    const Polygon parent = midpoint_parent(p);
    for (int i = 0; i < 3; ++i) {
        CHECK(norm(parent[i]) == doctest::Approx(2.0));  // doubled circumradius
        // parent vertex is the doubled opposite vertex: S_i = -2 P_{i+1}
        CHECK(distance(parent[i], -2.0 * p.vertex(i + 1)) < 1e-12);
    }
}

TEST_CASE("2 multi-area = parent area up to sign, random pentagons") {
    Rng rng(105);
    for (int k = 0; k < 100; ++k) {
        const Polygon p = test::random_polygon(rng, 5);
        const double lhs = 2.0 * multi_area(p);
        const double rhs = signed_area(midpoint_parent(p));
        CHECK(std::abs(std::abs(lhs) - std::abs(rhs)) <=
              1e-11 * std::max(1.0, std::abs(rhs)));
        // observed orientation: the two quantities have opposite signs
        if (std::abs(rhs) > 1e-9) CHECK(lhs * rhs < 0.0);
    }
}

TEST_CASE("perimeter of P is half the parent star-polygon perimeter") {
    Rng rng(106);
    for (int n : {5, 7, 9}) {
        const Polygon p = test::random_polygon(rng, n);
        const Polygon s = midpoint_parent(p);
        double star = 0.0;
        for (int i = 0; i < n; ++i) star += distance(s.vertex(i), s.vertex(i + 2));
        CHECK(perimeter(p) == doctest::Approx(0.5 * star).epsilon(1e-12));
    }
}
