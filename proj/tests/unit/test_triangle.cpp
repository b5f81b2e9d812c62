#include <doctest.h>

#include <cmath>

#include "bikelab/triangle.hpp"
#include "bikelab/rng.hpp"
#include "oracles.hpp"

using namespace bikelab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("shape_of: equilateral, 3-4-5, similarity invariance") {
    std::vector<Point2> eq;
    for (int i = 0; i < 3; ++i) {
        eq.push_back({std::cos(2 * M_PI * i / 3), std::sin(2 * M_PI * i / 3)});
    }
    const TriangleShape s_eq = shape_of(Polygon(eq));
    for (double a : s_eq.angles()) CHECK(a == doctest::Approx(kPi / 3).epsilon(1e-13));

    // right triangle with legs 3 and 4
    const TriangleShape s345 = shape_of(Polygon({{0, 0}, {3, 0}, {0, 4}}));
    std::array<double, 3> expected{std::asin(3.0 / 5.0), std::asin(4.0 / 5.0), kPi / 2};
    // canonical order = lex-min cyclic rotation of the vertex-ordered triple
    const TriangleShape s_expected(
        {kPi / 2, std::asin(4.0 / 5.0), std::asin(3.0 / 5.0)});
    (void)expected;
    CHECK(s345.distance(s_expected) < 1e-12);

    // similarity invariance: rotate by 1 rad, scale by 2
    std::vector<Point2> moved;
    for (const Point2& p : std::vector<Point2>{{0, 0}, {3, 0}, {0, 4}}) {
        moved.push_back({2 * (p.x * std::cos(1.0) - p.y * std::sin(1.0)),
                         2 * (p.x * std::sin(1.0) + p.y * std::cos(1.0))});
    }
    CHECK(shape_of(Polygon(moved)).distance(s345) < 1e-12);

    CHECK_THROWS_AS(shape_of(Polygon({{0, 0}, {1, 0}, {2, 1e-15}})), DegenerateTriangle);
}

TEST_CASE("canonical representative is the lex-min cyclic rotation") {
    const TriangleShape a({1.0, 0.5, kPi - 1.5});
    const TriangleShape b({0.5, kPi - 1.5, 1.0});
    const TriangleShape c({kPi - 1.5, 1.0, 0.5});
    CHECK(a.distance(b) < 1e-15);
    CHECK(b.distance(c) < 1e-15);
    CHECK(a.angles()[0] == 0.5);  // smallest first among cyclic rotations
}

TEST_CASE("embed_unit_area: area, placement, worked examples, round trip") {
    const Polygon eq = embed_unit_area(kPi / 3, kPi / 3, kPi / 3);
    CHECK(signed_area(eq) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(norm(eq[2]) == 0.0);          // vertex 2 at the origin
    CHECK(eq[1].y == 0.0);              // vertex 1 on the +x axis
    CHECK(eq[1].x > 0.0);
    CHECK(sides_of(eq).a[0] == doctest::Approx(std::sqrt(4.0 / std::sqrt(3.0))).epsilon(1e-12));

    const Polygon iso = embed_unit_area(kPi / 2, kPi / 4, kPi / 4);
    CHECK(signed_area(iso) == doctest::Approx(1.0).epsilon(1e-13));
    // legs of the right isosceles triangle have length sqrt(2)
    const SideTriple s = sides_of(iso);
    const std::array<double, 3> sorted{std::min({s.a[0], s.a[1], s.a[2]}),
                                       0.0,
                                       std::max({s.a[0], s.a[1], s.a[2]})};
    CHECK(sorted[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sorted[2] == doctest::Approx(2.0).epsilon(1e-12));

    Rng rng(401);
    for (int k = 0; k < 100; ++k) {
        const double alpha = rng.uniform(0.3, kPi - 0.9);
        const double beta = rng.uniform(0.3, kPi - alpha - 0.6);
        const TriangleShape shape({alpha, beta, kPi - alpha - beta});
        CHECK(shape_of(embed_unit_area(shape)).distance(shape) < 1e-12);
    }
}

TEST_CASE("integral I: worked values and identity of the three forms") {
    const TriangleShape eq({kPi / 3, kPi / 3, kPi / 3});
    CHECK(integral_I(eq) == doctest::Approx(3.0 * std::sqrt(3.0)).epsilon(1e-13));

    const TriangleShape iso({kPi / 2, kPi / 4, kPi / 4});
    CHECK(integral_I(iso) == doctest::Approx(3.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-13));

    Rng rng(402);
    for (int k = 0; k < 1000; ++k) {
        const double alpha = rng.uniform(0.2, kPi - 0.5);
        const double beta = rng.uniform(0.2, kPi - alpha - 0.25);
        const TriangleShape s({alpha, beta, kPi - alpha - beta});
        CHECK(integral_I(s) ==
              doctest::Approx(integral_I_product(s)).epsilon(1e-12));
    }
}

TEST_CASE("reduced form density") {
    const TriangleShape eq({kPi / 3, kPi / 3, kPi / 3});
    CHECK(reduced_form_density(eq) == doctest::Approx(4.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-13));

    const TriangleShape iso({kPi / 2, kPi / 4, kPi / 4});
    CHECK(reduced_form_density(iso) == doctest::Approx(1.0).epsilon(1e-13));

    // density blows up toward the simplex boundary
    CHECK(reduced_form_density(TriangleShape({1e-4, 1.0, kPi - 1.0 - 1e-4})) > 1e3);
}

TEST_CASE("sides_after: equilateral example, both forms, coordinate oracle") {
    const SideTriple eq({1.0, 1.0, 1.0});
    const SideTriple b = sides_after(eq, FrameLength{0.1}, Side::Forward);
    for (double len : b.a) CHECK(len * len == doctest::Approx(1.33).epsilon(1e-14));
    const SideTriple c = sides_after(eq, FrameLength{0.1}, Side::Backward);
    for (double len : c.a) CHECK(len * len == doctest::Approx(1.33).epsilon(1e-14));

    // tiny t is the identity to rounding
    const SideTriple near_id = sides_after(eq, FrameLength{1e-13}, Side::Forward);
    for (double len : near_id.a) CHECK(len == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(403);
    for (int k = 0; k < 300; ++k) {
        const Polygon tri = test::random_triangle(rng);
        const SideTriple s = sides_of(tri);
        const FrameLength t{rng.uniform(0.05, 0.45) * tri.min_side()};
        for (Side side : {Side::Forward, Side::Backward}) {
            const SideTriple pred = sides_after(s, t, side);
            const SideTriple alt = sides_after_alt(s, t, side);
            const SideTriple actual = sides_of(map_one_sided(tri, t, side));
            for (int i = 0; i < 3; ++i) {
                CHECK(pred.a[i] == doctest::Approx(actual.a[i]).epsilon(1e-10));
                CHECK(pred.a[i] == doctest::Approx(alt.a[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("area ratio: worked values and oracle") {
    const SideTriple eq({1.0, 1.0, 1.0});
    CHECK(area_ratio(eq, 0.1) == doctest::Approx(1.330).epsilon(1e-14));
    CHECK(area_ratio(eq, 0.0) == doctest::Approx(1.0));
    // cross-check with the side formula: an equilateral image has ratio b^2/a^2
    const SideTriple b = sides_after(eq, FrameLength{0.1}, Side::Forward);
    CHECK(area_ratio(eq, 0.1) == doctest::Approx(b.a[0] * b.a[0]).epsilon(1e-13));

    const SideTriple s345({4.0, 3.0, 5.0});
    CHECK(area_ratio(s345, 0.5) == doctest::Approx(86.5 / 60.0).epsilon(1e-14));
    CHECK(area_ratio_alt(s345, 0.5) == doctest::Approx(86.5 / 60.0).epsilon(1e-14));
    const Polygon tri({{0, 0}, {3, 0}, {0, 4}});
    const double shoelace =
        signed_area(map_one_sided(tri, FrameLength{0.5}, Side::Forward)) / signed_area(tri);
    CHECK(area_ratio(s345, 0.5) == doctest::Approx(shoelace).epsilon(1e-12));
}

TEST_CASE("limit sides: equilateral value, conserved product, scale invariance") {
    const SideTriple eq({1.0, 1.0, 1.0});
    for (double len : limit_sides(eq, Side::Forward).a) {
        CHECK(len * len == doctest::Approx(3.0).epsilon(1e-14));
    }

    Rng rng(404);
    for (int k = 0; k < 1000; ++k) {
        const SideTriple s = sides_of(test::random_triangle(rng));
        const SideTriple b = limit_sides(s, Side::Forward);
        const SideTriple c = limit_sides(s, Side::Backward);
        const double pb = b.a[0] * b.a[1] * b.a[2];
        const double pc = c.a[0] * c.a[1] * c.a[2];
        CHECK(pb == doctest::Approx(pc).epsilon(1e-12));
    }

    // degree-0 homogeneity: scaling the input leaves the output unchanged
    const SideTriple s({1.1, 0.9, 1.3});
    const SideTriple scaled({5.5, 4.5, 6.5});
    for (int i = 0; i < 3; ++i) {
        CHECK(limit_sides(s, Side::Forward).a[i] ==
              doctest::Approx(limit_sides(scaled, Side::Forward).a[i]).epsilon(1e-13));
    }
}

TEST_CASE("domain membership") {
    ToleranceConfig cfg;
    const TriangleShape eq({kPi / 3, kPi / 3, kPi / 3});
    const DomainMembership m = domain_membership(eq, 0.4, 1000, cfg);
    CHECK(m.member);
    CHECK(m.survived_steps == 1000);

    // a flat shape whose unit-area embedding has a side below 2t dies at step 0
    const TriangleShape flat({0.05, 1.2, kPi - 1.25});
    const Polygon embedded = embed_unit_area(flat);
    REQUIRE(embedded.min_side() < 0.8);
    const DomainMembership out = domain_membership(flat, 0.4, 100, cfg);
    CHECK_FALSE(out.member);
    CHECK(out.survived_steps == 0);
}

TEST_CASE("domain rasterization: counts shrink with t, center stays") {
    ToleranceConfig cfg;
    cfg.fixed_point_tol = 1e-10;
    const DomainGrid g1 = rasterize_domain(0.30, 24, 60, cfg, 2);
    const DomainGrid g2 = rasterize_domain(0.50, 24, 60, cfg, 2);
    CHECK(g1.member_count > 0);
    CHECK(g2.member_count > 0);
    CHECK(g2.member_count < g1.member_count);

    // nesting: members at the larger t are members at the smaller t
    int violations = 0;
    for (std::size_t i = 0; i < g1.cells.size(); ++i) {
        if (g2.cells[i].member && !g1.cells[i].member) ++violations;
    }
    CHECK(violations == 0);

    // the equilateral center cell is a member in both
    bool center1 = false, center2 = false;
    for (std::size_t i = 0; i < g1.cells.size(); ++i) {
        if (std::abs(g1.cells[i].alpha - kPi / 3) < 0.1 &&
            std::abs(g1.cells[i].beta - kPi / 3) < 0.1) {
            center1 = center1 || g1.cells[i].member;
            center2 = center2 || g2.cells[i].member;
        }
    }
    CHECK(center1);
    CHECK(center2);
}

TEST_CASE("shape dynamics descends to the shape space") {
    ToleranceConfig cfg;
    Rng rng(405);
    const double t = 0.3;
    const TriangleShape s({0.8, 1.1, kPi - 1.9});

    // two unit-area embeddings of one shape: rotated + translated copies
    const Polygon p1 = embed_unit_area(s);
    std::vector<Point2> moved;
    const double rot = 1.2;
    for (const Point2& q : p1.vertices()) {
        moved.push_back({3.0 + q.x * std::cos(rot) - q.y * std::sin(rot),
                         -2.0 + q.x * std::sin(rot) + q.y * std::cos(rot)});
    }
    const Polygon p2(moved);
    const TriangleShape s1 = shape_of(map_f(p1, FrameLength{t}, 1, cfg));
    const TriangleShape s2 = shape_of(map_f(p2, FrameLength{t}, 1, cfg));
    CHECK(s1.distance(s2) < 1e-10);
    (void)rng;
}

TEST_CASE("S3 equivariance: even relabelings commute, odd ones invert") {
    ToleranceConfig cfg;
    const double t = 0.25;
    const TriangleShape s({0.8, 1.1, kPi - 1.9});
    const Polygon p = embed_unit_area(s);

    // cyclic (even) relabeling commutes with the map
    std::vector<Point2> rotated{p[1], p[2], p[0]};
    const TriangleShape a = shape_of(map_f(Polygon(rotated), FrameLength{t}, 1, cfg));
    const TriangleShape b = shape_of(map_f(p, FrameLength{t}, 1, cfg));
    CHECK(a.distance(b) < 1e-9);

    // An odd relabeling reverses the cyclic label order; conjugating f_t by it
    // yields the inverse map: f_t(reverse(P)) = reverse(f_t^{-1}(P)).
    const Polygon lhs = map_f(p.reversed(), FrameLength{t}, 1, cfg).reversed();
    const Polygon rhs = map_f(p, FrameLength{t}, -1, cfg);
    CHECK(test::max_vertex_distance(lhs, rhs) < 1e-9 * p.diameter());
    CHECK(shape_of(lhs).distance(shape_of(rhs)) < 1e-9);

    // A plane reflection with labels kept commutes with f_t outright (the
    // edge unit vectors transform covariantly).
    const auto mirror = [](const Polygon& q) {
        std::vector<Point2> v;
        for (const Point2& w : q.vertices()) v.push_back({w.x, -w.y});
        return Polygon(v);
    };
    const Polygon commuted = mirror(map_f(mirror(p), FrameLength{t}, 1, cfg));
    CHECK(test::max_vertex_distance(commuted, map_f(p, FrameLength{t}, 1, cfg)) <
          1e-9 * p.diameter());
}

TEST_CASE("measure preservation on the shape space") {
    // |det DF| * rho(F(x)) = rho(x) for the induced chart map F at fixed t.
    ToleranceConfig cfg;
    Rng rng(406);
    const double t = 0.25;
    const double h = 1e-6;
    int tested = 0;
    while (tested < 20) {
        const double alpha = rng.uniform(0.6, 1.4);
        const double beta = rng.uniform(0.6, std::min(1.4, kPi - alpha - 0.5));
        const TriangleShape s({alpha, beta, kPi - alpha - beta});
        if (!domain_membership(s, t, 5, cfg).member) continue;
        ++tested;

        const auto fa = shape_chart_map(alpha + h, beta, t, cfg);
        const auto fb = shape_chart_map(alpha - h, beta, t, cfg);
        const auto fc = shape_chart_map(alpha, beta + h, t, cfg);
        const auto fd = shape_chart_map(alpha, beta - h, t, cfg);
        const double j11 = (fa.first - fb.first) / (2 * h);
        const double j21 = (fa.second - fb.second) / (2 * h);
        const double j12 = (fc.first - fd.first) / (2 * h);
        const double j22 = (fc.second - fd.second) / (2 * h);
        const double jac = std::abs(j11 * j22 - j12 * j21);

        const auto image = shape_chart_map(alpha, beta, t, cfg);
        const TriangleShape si({image.first, image.second, kPi - image.first - image.second});
        const double lhs = jac * reduced_form_density(si);
        const double rhs = reduced_form_density(s);
        CHECK(std::abs(lhs - rhs) / rhs < 1e-4);
    }
}

TEST_CASE("period-6 orbit at t = 0.56") {
    ToleranceConfig cfg;
    // seed near the known root; the continuation driver finds it unaided
    const Period6Result res = period6_search(0.56, SideTriple({0.85, 0.72, 0.48}), cfg);
    CHECK(res.converged);
    CHECK(res.verified);
    CHECK(res.sides[0] == doctest::Approx(0.851241).epsilon(1e-4));
    CHECK(res.sides[1] == doctest::Approx(0.721892).epsilon(1e-4));
    CHECK(res.sides[2] == doctest::Approx(0.478819).epsilon(1e-4));
    CHECK(res.shape_return_error < 1e-8);
}

TEST_CASE("period-6: no non-equilateral root at t = 0.40") {
    ToleranceConfig cfg;
    const double disc = 16.0 / std::sqrt(3.0) - 3.0 * 0.16;
    const double astar = 0.5 * (-3.0 * 0.40 + std::sqrt(disc));
    for (double d : {0.1, 0.3, 0.5}) {
        for (const std::array<double, 3>& seed :
             {std::array<double, 3>{astar * (1 + d), astar, astar * (1 - d)},
              std::array<double, 3>{astar * (1 + d), astar * (1 - d), astar},
              std::array<double, 3>{astar, astar * (1 + d), astar * (1 - d)}}) {
            Period6Result res;
            try {
                res = period6_search(0.40, SideTriple(seed), cfg);
            } catch (const DegenerateTriangle&) {
                continue;
            }
            CHECK_FALSE(res.verified);
        }
    }
}

TEST_CASE("period-6 orbit vertices lie on four concentric circles") {
    // The squared map rotates each of the two isosceles classes about an
    // invariant center, so apex and base vertices sweep four circles.
    ToleranceConfig cfg;
    const Period6Result res = period6_search(0.56, SideTriple({0.85, 0.72, 0.48}), cfg);
    REQUIRE(res.verified);

    const Polygon p = triangle_from_sides(SideTriple(res.sides));
    std::vector<Polygon> orbit_polys;
    orbit_polys.push_back(map_one_sided(p, FrameLength{0.56}, Side::Forward));
    for (int k = 0; k < 12; ++k) {
        orbit_polys.push_back(map_f(orbit_polys.back(), FrameLength{0.56}, 1, cfg));
    }

    // apex = the vertex whose angle differs from both others
    const auto apex_index = [](const Polygon& q) {
        const std::array<double, 3> a = triangle_angles(q);
        const double d01 = std::abs(a[0] - a[1]);
        const double d12 = std::abs(a[1] - a[2]);
        const double d02 = std::abs(a[0] - a[2]);
        if (d01 < d12 && d01 < d02) return 2;
        if (d12 < d01 && d12 < d02) return 0;
        return 1;
    };
    const auto circumcenter = [](const Point2& a, const Point2& b, const Point2& c) {
        const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
        const double ax = dot(a, a), bx = dot(b, b), cx = dot(c, c);
        return Point2{(ax * (b.y - c.y) + bx * (c.y - a.y) + cx * (a.y - b.y)) / d,
                      (ax * (c.x - b.x) + bx * (a.x - c.x) + cx * (b.x - a.x)) / d};
    };

    const Point2 center = circumcenter(orbit_polys[0][apex_index(orbit_polys[0])],
                                       orbit_polys[2][apex_index(orbit_polys[2])],
                                       orbit_polys[4][apex_index(orbit_polys[4])]);
    // the other class shares the invariant center
    const Point2 center_odd = circumcenter(orbit_polys[1][apex_index(orbit_polys[1])],
                                           orbit_polys[3][apex_index(orbit_polys[3])],
                                           orbit_polys[5][apex_index(orbit_polys[5])]);
    CHECK(distance(center, center_odd) < 1e-6);

    // four radius classes: (apex, base) x (even steps, odd steps)
    std::array<std::pair<double, double>, 4> spread;  // (min, max) per class
    for (auto& s : spread) s = {1e300, 0.0};
    for (std::size_t k = 0; k < orbit_polys.size(); ++k) {
        const Polygon& q = orbit_polys[k];
        const int apex = apex_index(q);
        for (int i = 0; i < 3; ++i) {
            const int cls = 2 * static_cast<int>(k % 2) + (i == apex ? 0 : 1);
            const double r = distance(q[i], center);
            spread[cls].first = std::min(spread[cls].first, r);
            spread[cls].second = std::max(spread[cls].second, r);
        }
    }
    for (const auto& [lo, hi] : spread) CHECK(hi - lo < 1e-6);
    // and the four radii are genuinely distinct circles
    std::array<double, 4> radii{spread[0].first, spread[1].first, spread[2].first,
                                spread[3].first};
    std::sort(radii.begin(), radii.end());
    for (int i = 0; i + 1 < 4; ++i) CHECK(radii[i + 1] - radii[i] > 1e-3);
}

TEST_CASE("shape flow loop: isometric returns and relabelings") {
    ToleranceConfig cfg;
    const TriangleShape s({0.7, 1.1, kPi - 1.8});
    const ShapeLoopResult loop = trace_shape_loop(s, cfg);
    CHECK(loop.closed);
    CHECK(loop.period > 0.0);
    CHECK(loop.dips.size() >= 6);
    CHECK(loop.dips.front().sorted_side_error < 1e-6);
    CHECK(loop.max_integral_drift < 1e-7);
    CHECK(loop.max_perimeter_drift < 1e-8);
    CHECK(loop.visits_all_cyclic_relabelings);
}
