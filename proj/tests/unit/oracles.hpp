#pragma once

#include <array>
#include <cmath>

#include "bikelab/geometry.hpp"
#include "bikelab/rng.hpp"
#include "bikelab/triangle.hpp"

// Test-only oracles, independent of the implementation paths they check.

namespace bikelab::test {

// Multi-area as the double sum over vertex pairs (the implementation uses the
// single-sum form; this is the cross-checking oracle).
inline double multi_area_double_sum(const Polygon& p) {
    const int n = p.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{i+j}, 0-based
            s += sign * det(p[i], p[j]);
        }
    }
    return s;
}

// Bisection root of a monotone function; used as the fixed-point oracle.
template <typename F>
double bisect(F f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Random n-gon with min side bounded away from zero.
inline Polygon random_polygon(Rng& rng, int n) {
    for (;;) {
        std::vector<Point2> v;
        for (int i = 0; i < n; ++i) v.push_back(rng.point(-1.0, 1.0));
        Polygon p(std::move(v));
        if (p.min_side() > 0.15 * p.diameter()) return p;
    }
}

// Random well-conditioned triangle with random pose and scale.
inline Polygon random_triangle(Rng& rng) {
    constexpr double kPi = 3.14159265358979323846;
    const double alpha = rng.uniform(0.3, kPi - 0.9);
    const double beta = rng.uniform(0.3, kPi - alpha - 0.6);
    Polygon p = embed_unit_area(alpha, beta, kPi - alpha - beta);
    const double scale = rng.uniform(0.5, 2.0);
    const double rot = rng.uniform(0.0, 2.0 * kPi);
    const Point2 shift = rng.point(-1.0, 1.0);
    std::vector<Point2> v;
    for (int i = 0; i < 3; ++i) {
        const Point2& q = p[i];
        v.push_back({shift.x + scale * (q.x * std::cos(rot) - q.y * std::sin(rot)),
                     shift.y + scale * (q.x * std::sin(rot) + q.y * std::cos(rot))});
    }
    return Polygon(std::move(v));
}

inline double max_vertex_distance(const Polygon& a, const Polygon& b) {
    double d = 0.0;
    for (int i = 0; i < a.size(); ++i) d = std::max(d, distance(a[i], b[i]));
    return d;
}

}  // namespace bikelab::test
